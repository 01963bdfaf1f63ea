#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gaplab/model.hpp"
#include "gaplab/transfer.hpp"

namespace gaplab::gspace {

// Chain vectors live in C^{n^l} with site 0 the MOST significant index:
// component index of the word (mu_0, ..., mu_{l-1}) is sum_x mu_x n^{l-1-x}.

// Gamma_l(X): the chain vector with word coefficients Tr(X v_word^*),
// computed by a depth-first walk over partial products (never by storing
// per-level coefficient tables).
Vec gamma(const std::vector<Mat>& v, int l, const Mat& X);

/// Gram operator of the word family: M_N = sum_w vec(v_w) vec(v_w)^dagger,
// built by the appending recursion; <Gamma(X), Gamma(Y)> = vec(X)^dag M vec(Y).
Mat gram_operator(const std::vector<Mat>& v, int N);
// All of M_1..M_N in one sweep.
std::vector<Mat> gram_operator_profile(const std::vector<Mat>& v, int N);

// Matrices Z_1..Z_d in p M_k q whose chain images are orthonormal, found via
// the Gram operator alone (valid when the chain map is injective on p M_k q);
// usable at chain lengths far beyond dense vectors.
std::vector<Mat> orthonormal_preimages(const std::vector<Mat>& v, const Mat& p,
                                       const Mat& q, int N);

struct GammaFrame {
  int l = 0;
  la::Subspace space;          // Ran Gamma_l restricted to the domain used
  std::vector<Mat> preimages;  // Gamma(preimages[i]) = frame col i (injective
                               // case only)
  bool injective = false;      // Gamma injective on the domain basis
  bool bijective = false;      // image on domain == image on all of M_k
  Index domain_dim = 0;
};

// Domain = p M_k q when p, q are nonempty; full M_k when both are 0x0.
// bijectivity (image equality with the full-domain image) is only evaluated
// when check_bijective is set and the full-image computation fits in memory.
GammaFrame gamma_frame(const std::vector<Mat>& v, int l, const Mat& p,
                       const Mat& q, bool check_bijective = true);

// Smallest M <= cap such that Gamma_N is injective on p M_k q for every
// N = M..cap; -1 if none.
int injectivity_threshold(const std::vector<Mat>& v, const Mat& p, const Mat& q,
                          int cap = 12);

struct IntersectionReport {
  int m = 0;
  int N_max = 0;
  std::vector<int> N_checked;
  std::vector<double> distances;   // distance(intersection of shifts, Ran Gamma_N)
  bool holds = false;              // all distances <= 1e-9
  double recursion_residual = 0;   // max residual of both recursion identities
  bool classa_checked = false;
  double classa_inclusion_residual = 0;  // conjugated-span inclusion residual
  int empirical_m = -1;  // smallest m' <= m with the property at all checked N
};

// Checks that the intersection of all embedded window ground spaces equals
// Ran Gamma_N for N = m..N_max (dense sizes only), plus the recursion
// identities on random X, plus (for class members) the invertible-element
// span inclusion that drives the intersection argument.
IntersectionReport intersection_property(const std::vector<Mat>& v, int m,
                                         int N_max,
                                         const model::ClassATuple* classa = nullptr,
                                         std::uint64_t seed = 0);

struct OverlapReport {
  int l = 0;
  int N = 0;
  std::optional<double> numeric;   // exact ||(1 (x) G_l)(G_N (x) 1 - G_{N+1})||
  std::optional<double> analytic;  // 2 F E(l-1) (F^2 E(l-1) + 1)
  bool analytic_valid = false;     // l-1 >= max{m1, L}
  // Preferred value: numeric when present, else analytic.
  double value() const;
};

// Requires N >= 2l. dense_cap bounds the chain vector length n^{N+1} for the
// numeric branch; above it only the analytic value is produced (and requires
// decay constants).
OverlapReport epsilon_overlap(const std::vector<Mat>& v, int l, int N,
                              const transfer::DecayConstants* dc = nullptr,
                              int m1 = -1, Index dense_cap = Index(1) << 20);

struct GramReport {
  int N = 0;
  int trials = 0;
  double max_pairing_violation = 0;   // pairing estimate slack (<= 0 passes)
  double max_twosided_violation = 0;  // two-sided norm estimate slack
  double max_norm_violation = 0;      // uniform lower bound for N >= L
  bool pass = false;
};

// Draws random X, Y in p M_k q and verifies the weighted-inner-product
// estimates against exact chain inner products (computed via the Gram
// operator, so arbitrary N is cheap).
GramReport gram_estimates(const std::vector<Mat>& v, const Mat& p, const Mat& q,
                          const transfer::SpectralTripleII& t, int N,
                          int trials, std::uint64_t seed = 0);

}  // namespace gaplab::gspace
