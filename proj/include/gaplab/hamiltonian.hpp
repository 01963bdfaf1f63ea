#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/ground_space.hpp"
#include "gaplab/transfer.hpp"

namespace gaplab::ham {

// Dense N-site chain Hamiltonian: sum over window positions of the embedded
// projection onto the orthogonal complement of the window ground space.
// Guarded by dense_cap on the matrix side length n^N.
Mat build_H(const std::vector<Mat>& v, int m, int N, Index dense_cap = 4096);

// Matrix-free application of the same operator to a chain vector.
struct HApply {
  int n = 0, m = 0, N = 0;
  Index dim = 0;
  Mat Fm;  // orthonormal frame of the window ground space, n^m x d
  Vec operator()(const Vec& w) const;
};
HApply make_h_apply(const std::vector<Mat>& v, int m, int N);

// Smallest eigenvalue of a Hermitian operator given by apply, via Lanczos
// with full reorthogonalization; deflate spans the provided orthonormal
// columns (iterates are kept orthogonal to it). Returns the Ritz value and
// its residual norm.
struct LanczosResult {
  double value = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};
LanczosResult lanczos_min_eig(const std::function<Vec(const Vec&)>& apply,
                              Index dim, const Mat& deflate, int max_iter = 300,
                              double tol = 1e-10, std::uint64_t seed = 7);

struct SpectrumReport {
  int m = 0, N = 0;
  Index dim = 0;
  double ground_energy = 0;
  std::optional<double> gap;  // smallest eigenvalue above zero_tol
  Index kernel_dim = 0;
  la::Subspace kernel;            // dense path: eigenvector frame;
                                  // iterative path: Gamma frame
  double kernel_gamma_distance = 0;
  bool kernel_matches_gamma = false;
  double kernel_residual = 0;  // max ||H f|| over kernel frame columns
  std::string method;          // "dense" or "lanczos"
  double zero_tol = 0;
};

// Dense eigensolve when n^N <= dense_cap_mat; otherwise matrix-free Lanczos
// with the Gamma frame as certified kernel (residual-checked) and deflation
// for the gap. Guarded by dense_cap_vec on the vector length.
SpectrumReport exact_spectrum(const std::vector<Mat>& v, int m, int N,
                              Index dense_cap_vec = Index(1) << 20,
                              Index dense_cap_mat = 1024);

struct GapCertificate {
  int m = 0, l = 0;
  double gamma_lm = 0;  // min nonzero eigenvalue over the l- and 2l-site chains
  double epsilon = 0;
  std::string epsilon_source;  // "numeric" or "analytic"
  std::optional<double> eps_numeric, eps_analytic;
  double bound = 0;    // (gamma/(l+2)) (1 - eps sqrt(l))^2
  int valid_from = 0;  // 2l + 1
};

// Requires l >= m. Throws math_reject("martingale-fails-at-l") when
// eps * sqrt(l) >= 1, cap_exceeded when no epsilon source is available.
GapCertificate gap_certificate(const std::vector<Mat>& v, int m, int l,
                               const transfer::DecayConstants& dc, int m1 = -1,
                               Index dense_cap_vec = Index(1) << 20);

}  // namespace gaplab::ham
