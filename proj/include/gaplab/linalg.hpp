#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaplab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown when inputs have inconsistent shapes or malformed content.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an input is well-formed but mathematically rejected
// (fails a structural hypothesis, e.g. "not-spectral-II", "not-psd").
struct math_reject : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a requested computation exceeds a size or iteration cap.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named residual check inside a validation report.
struct CheckItem {
  std::string name;
  double residual = 0;
  bool pass = false;
  std::string note;
};

namespace la {

constexpr double default_rank_tol = 1e-10;

// A linear subspace of C^ambient held as an orthonormal column frame.
struct Subspace {
  Index ambient = 0;
  Mat frame;  // ambient x dim, orthonormal columns
  Index dim() const { return frame.cols(); }
};

// Span of a set of vectors; rank cut at singular values > tol * sigma_max.
Subspace orthonormal_span(const std::vector<Vec>& vectors,
                          double tol = default_rank_tol);
Subspace orthonormal_span_cols(const Mat& columns,
                               double tol = default_rank_tol);
// Span of vectorized matrices (all the same shape).
Subspace orthonormal_span_mats(const std::vector<Mat>& mats,
                               double tol = default_rank_tol);

struct EigH {
  RVec values;  // ascending
  Mat frame;    // unitary, columns are eigenvectors
};
// Eigendecomposition of a (tolerantly) Hermitian matrix; throws math_reject
// if H deviates from Hermitian by more than herm_tol * max(||H||, 1).
EigH eig_hermitian(const Mat& H, double herm_tol = 1e-9);

struct SupportPinv {
  Mat support;  // orthogonal projection onto the range
  Mat pinv;     // Moore-Penrose inverse (on the support)
  Index rank = 0;
};
// For PSD input: support projection and pseudo-inverse, eigenvalues > tol*||A||
// counted as nonzero. Throws math_reject on a negative eigenvalue < -tol*||A||.
SupportPinv support_and_pinv(const Mat& A, double tol = default_rank_tol);

// max(||(1-P_V)P_U||, ||(1-P_U)P_V||) = ||P_U - P_V||; equals the sine of the
// largest principal angle when dims agree, 1 when they differ. Computed from
// the frames without materializing projectors.
double subspace_distance(const Subspace& U, const Subspace& V);

// Smallest eigenvalue exceeding zero_tol of a PSD matrix, or nullopt if all
// eigenvalues are <= zero_tol. Throws math_reject if an eigenvalue < -zero_tol.
std::optional<double> min_nonzero_eig(const Mat& H, double zero_tol);

Mat kron(const Mat& A, const Mat& B);
Vec vec(const Mat& X);  // column-major stacking
Mat unvec(const Vec& x, Index rows, Index cols);
double op_norm(const Mat& A);  // largest singular value
double hs_norm(const Mat& A);
Mat dagger(const Mat& A);
// Square root of a PSD matrix (negative dust below tol*||A|| clamped to 0).
Mat psd_sqrt(const Mat& A, double tol = default_rank_tol);
// Matrix unit |i><j| in M_k.
Mat unit(Index k, Index i, Index j);
// Trace distance (1/2)||A - B||_1 for Hermitian A, B.
double trace_distance(const Mat& A, const Mat& B);
// Trace norm ||A||_1 (sum of singular values).
double trace_norm(const Mat& A);

// Least-squares fit value_i ~ C * s^i on log scale, skipping the first
// burn_in points and any nonpositive values; C is then raised so that
// value_i <= C * s^i holds pointwise past the burn-in. A series with no
// usable points sets skipped = true.
struct DecayFit {
  double C = 0;
  double s = 0;
  double log_residual = 0;  // max |log(value_i) - log(C s^i)| over fit points
  bool skipped = false;
  int burn_in = 2;
};
DecayFit fit_decay(const std::vector<double>& values, int burn_in = 2);

// Deterministic seeded Gaussian ensembles.
struct Rng {
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double gauss() { return normal(gen); }
  cd cgauss() { return cd(gauss(), gauss()); }
  Vec gauss_vec(Index k);
  Mat gauss_mat(Index r, Index c);
  Mat herm(Index k);  // Hermitian Gaussian
  Mat psd(Index k);   // G G^dagger
};

}  // namespace la
}  // namespace gaplab
