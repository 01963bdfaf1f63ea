#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaplab/linalg.hpp"

namespace gaplab::transfer {

// Matrix representation of X -> sum_mu v_mu X v_mu^* on vectorized input
// (column-major vec, so the representation is sum_mu conj(v_mu) (x) v_mu).
struct TransferRep {
  Index k = 0;
  Mat That;  // k^2 x k^2
  double spectral_radius = 0;
  std::vector<cd> eigenvalues;  // all k^2
  std::vector<cd> peripheral;   // |lambda| > radius - peripheral_tol
};

constexpr double peripheral_tol = 1e-8;

TransferRep transfer_matrix_rep(const std::vector<Mat>& v);

Mat apply_T(const std::vector<Mat>& v, const Mat& X);      // sum v X v^*
Mat apply_T_adj(const std::vector<Mat>& v, const Mat& X);  // sum v^* X v
std::vector<Mat> corner_tuple(const std::vector<Mat>& v, const Mat& p);

// Sound upper bound on the operator->operator norm of a superoperator given
// its matrix representation: sqrt(k) * (largest singular value).
double supop_norm_ub(const Mat& rep, Index k);

// Data of a tuple whose transfer map has a simple peripheral eigenvalue 1
// with all other spectrum strictly inside the unit disc, together with the
// invariant PSD pair (e, rho) normalized so Tr rho = 1 and Tr(rho e) = 1.
struct SpectralTripleII {
  Index k = 0;
  double s = 0;        // largest non-peripheral |eigenvalue|
  double s_prime = 0;  // contour radius (1 + s) / 2 used for resolvent bound
  double resolvent_bound = 0;  // max over sampled |z| = s_prime of
                               // ||(z - T)^{-1}|| (HS -> HS)
  Mat e;               // right fixed point, PSD
  Mat rho;             // left fixed point, PSD, trace one
  Mat support_e;       // projection
  Mat support_rho;     // projection
  Mat That;            // cached matrix representation
  double invariance_residual = 0;  // max of ||T(e)-e||, ||T*(rho)-rho||
};

// Computes the triple and verifies: spectral radius 1 within 1e-8, simple
// peripheral eigenvalue, PSD fixed points, supports matching the expected
// projections p and q within 1e-9. Throws math_reject("not-spectral-II: ...")
// on any failure.
SpectralTripleII fixed_point_triple(const std::vector<Mat>& v, const Mat& p,
                                    const Mat& q);

struct Condition2Report {
  bool all_pass = false;
  std::vector<CheckItem> items;  // named (i)..(viii)
};

// Checks the eight structural conditions for the pair of corner projections
// (p, q): exact algebra for (i)-(iii), corner spectral analysis for (iv)-(vi),
// and sampled vector-growth checks for (vii)/(viii) (marked in the note).
Condition2Report check_condition2(const std::vector<Mat>& v, const Mat& p,
                                  const Mat& q, std::uint64_t seed = 0,
                                  int growth_cap = 64);

// Quantities controlling Gram-estimate and overlap bounds.
struct DecayConstants {
  double a = 0;  // 1/||pinv(e)||
  double c = 0;  // 1/||pinv(rho)||
  Mat x;         // pinv(e)
  Mat y;         // pinv(rho)
  std::vector<double> E;       // E[N] for N = 0..N_max (upper bounds)
  std::vector<double> Etilde;  // Etilde[N]
  double F = 0;                // sup_N ||T^N(1-P1)|| + ||e||
  int L = -1;                  // first N with sup_{N' >= N} E(N') < 1/2
  int N_max = 0;
  double C_contour = 0;  // E(N) <= C_contour * s_prime^N for all N
  double s_prime = 0;
  la::DecayFit E_fit;  // envelope fit of the sampled E profile
};

// Throws cap_exceeded("L-not-found") if the E profile never drops below 1/2
// on the sampled range with a decaying tail.
DecayConstants decay_constants(const std::vector<Mat>& v,
                               const SpectralTripleII& t, int N_max = 60);

// <X, Y>_v = phi(X^* e Y) = Tr(rho X^* e Y).
cd weighted_inner(const SpectralTripleII& t, const Mat& X, const Mat& Y);

struct BasicCpReport {
  int N = 0;
  int trials = 0;
  std::vector<CheckItem> items;
  double min_slack = 0;  // most negative (RHS - LHS) over all inequalities
  bool all_pass = false;
};

// Evaluates both sides of the four block-decomposition identities and
// inequalities for a tuple with v_mu p = p v_mu p and asserts each with
// slack >= -1e-9. Superoperator norm factors on the right-hand sides use
// sound upper bounds, which only weakens true inequalities.
BasicCpReport basiccp_bounds_check(const std::vector<Mat>& v, const Mat& p,
                                   int N, int trials, std::uint64_t seed = 0);

}  // namespace gaplab::transfer
