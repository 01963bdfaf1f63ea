#pragma once

#include <string>
#include <vector>

#include "gaplab/linalg.hpp"

namespace gaplab::model {

// Spectral weight vector indexed i = -kR..kL (array index i + kR):
// lambda_0 = 1, moduli strictly below 1 on both wings and nondecreasing
// toward the center.
struct WoVector {
  int kR = 0;
  int kL = 0;
  Vec lambda;  // size kR + kL + 1
  Index dim() const { return kR + kL + 1; }
  cd lam(int i) const { return lambda(i + kR); }
  Mat Lambda() const;                       // diag(lambda)
  std::vector<std::string> check() const;   // ordering violations, empty if OK
};

// Right/left boundary tuples: D[a-1] = D_a in M_{kR+1} (indices -kR..0),
// G[b-1] = G_b in M_{kL+1} (indices 0..kL).
struct BoundaryTuples {
  std::vector<Mat> D;
  std::vector<Mat> G;
};

// The full boundary-data package (weights, boundary tuples, upper-triangular Y).
struct Tetrad {
  WoVector wo;
  BoundaryTuples bd;
  Mat Y;  // dim x dim, strictly upper triangular
  Index dim() const { return wo.dim(); }
  Mat M() const;  // Lambda (1 + Y)
  // Embeddings of the corner blocks into M_dim (zero elsewhere).
  Mat IR(const Mat& A) const;  // A in M_{kR+1}, block indices -kR..0
  Mat IL(const Mat& B) const;  // B in M_{kL+1}, block indices 0..kL
  Mat PR() const;  // projection onto indices -kR..0
  Mat PL() const;  // projection onto indices 0..kL
  Mat E(int i, int j) const;  // |f_i><f_j| with block indices
  // Basis of the boundary subalgebra: 1, IR(D_a), IL(G_b), E_{-a,b}.
  std::vector<Mat> algebra_basis() const;
};

struct TetradReport {
  bool accepted = false;
  int L_check = 0;
  std::vector<CheckItem> checks;
  std::string failure;  // first failing check, empty when accepted
};

// Validates shapes, weight ordering, the corner-tuple normalizations and
// closure, the commutation identities with Lambda and Y, and the two
// conjugation identity families at powers l = 1..L_check. Also cross-checks
// invariance of the boundary subalgebra under conjugation by M.
TetradReport validate_tetrad(const Tetrad& t, double tol = 1e-10);

// A site tuple of k x k matrices, k = n0 * (kR + kL + 1), built over a tetrad.
struct ClassATuple {
  int n = 0;   // physical dimension (number of matrices)
  int n0 = 0;  // bulk block size
  Tetrad tetrad;
  std::vector<Mat> B;
  Index k() const { return n0 * tetrad.dim(); }
  Mat PhatR() const;  // 1_{n0} (x) PR
  Mat PhatL() const;  // 1_{n0} (x) PL
};

// One-parameter family of instances; kappa in (0,1), n >= 2, n0 >= 1.
ClassATuple build_kappa_example(int n0, int kR, int kL, double kappa, int n);
// Spin-1 chain tuple with n = 3, n0 = 2, trivial boundary data.
ClassATuple builtin_aklt();

// Span of length-l site monomials v_{mu_0} ... v_{mu_{l-1}} (vectorized),
// computed iteratively (never by enumerating words).
la::Subspace monomial_span(const std::vector<Mat>& v, int l);

// Smallest l such that the monomial span equals
// M_{n0} (x) (algebra * M^l') for l' = l..l+persistence; -1 if none <= l_max.
int compute_lB(const ClassATuple& t, int l_max = 64, int persistence = 3);

struct MembershipReport {
  bool member = false;
  TetradReport tetrad;
  std::vector<double> span_residuals;  // per B_mu, relative
  int l_B = -1;
  double transfer_radius = 0;
  std::string failure;
};

// Full membership test: tetrad validity, per-matrix membership in
// M_{n0} (x) (algebra * M), finiteness of l_B, unit transfer spectral radius.
MembershipReport validate_classa(const ClassATuple& t);

struct BulkTuple {
  std::vector<Mat> omega;  // n matrices, n0 x n0
  bool primitive = false;
  int l_omega = -1;   // smallest l with full monomial span, -1 if none found
  double radius = 0;  // spectral radius of the bulk transfer map
};

// Extracts the central-corner tuple and certifies primitivity.
// Throws math_reject if t fails membership.
BulkTuple extract_bulk_tuple(const ClassATuple& t, int l_max = 64);

// Primitivity of an arbitrary tuple (full monomial span at some l <= l_max).
bool is_primitive(const std::vector<Mat>& v, int l_max, int* l_found = nullptr);

}  // namespace gaplab::model
