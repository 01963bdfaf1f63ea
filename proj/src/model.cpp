#include "gaplab/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gaplab/transfer.hpp"

namespace gaplab::model {

Mat WoVector::Lambda() const {
  Mat out = Mat::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i) out(i, i) = lambda(i);
  return out;
}

std::vector<std::string> WoVector::check() const {
  std::vector<std::string> errs;
  if (lambda.size() != dim())
    return {"lambda has size " + std::to_string(lambda.size()) +
            ", expected " + std::to_string(dim())};
  if (lam(0) != cd(1, 0)) errs.push_back("Wo: lambda_0 != 1");
  for (int i = 1; i <= kR; ++i) {
    double cur = std::abs(lam(-i));
    if (!(cur > 0)) errs.push_back("Wo: lambda_{-" + std::to_string(i) + "} vanishes");
    if (!(cur < 1))
      errs.push_back("Wo: |lambda_{-" + std::to_string(i) + "}| is not < 1");
    if (i >= 2 && std::abs(lam(-i)) > std::abs(lam(-(i - 1))))
      errs.push_back("Wo: |lambda_{-" + std::to_string(i) +
                     "}| exceeds |lambda_{-" + std::to_string(i - 1) + "}|");
  }
  for (int i = 1; i <= kL; ++i) {
    double cur = std::abs(lam(i));
    if (!(cur > 0)) errs.push_back("Wo: lambda_" + std::to_string(i) + " vanishes");
    if (!(cur < 1))
      errs.push_back("Wo: |lambda_" + std::to_string(i) + "| is not < 1");
    if (i >= 2 && std::abs(lam(i)) > std::abs(lam(i - 1)))
      errs.push_back("Wo: |lambda_" + std::to_string(i) + "| exceeds |lambda_" +
                     std::to_string(i - 1) + "|");
  }
  return errs;
}

Mat Tetrad::M() const {
  return wo.Lambda() * (Mat::Identity(dim(), dim()) + Y);
}

Mat Tetrad::IR(const Mat& A) const {
  Index r = wo.kR + 1;
  if (A.rows() != r || A.cols() != r)
    throw dimension_error("IR: block size mismatch");
  Mat out = Mat::Zero(dim(), dim());
  out.block(0, 0, r, r) = A;
  return out;
}

Mat Tetrad::IL(const Mat& B) const {
  Index r = wo.kL + 1;
  if (B.rows() != r || B.cols() != r)
    throw dimension_error("IL: block size mismatch");
  Mat out = Mat::Zero(dim(), dim());
  out.block(wo.kR, wo.kR, r, r) = B;
  return out;
}

Mat Tetrad::PR() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int i = -wo.kR; i <= 0; ++i) out(i + wo.kR, i + wo.kR) = 1.0;
  return out;
}

Mat Tetrad::PL() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int i = 0; i <= wo.kL; ++i) out(i + wo.kR, i + wo.kR) = 1.0;
  return out;
}

Mat Tetrad::E(int i, int j) const {
  return la::unit(dim(), i + wo.kR, j + wo.kR);
}

std::vector<Mat> Tetrad::algebra_basis() const {
  std::vector<Mat> out;
  out.push_back(Mat::Identity(dim(), dim()));
  for (int a = 1; a <= wo.kR; ++a) out.push_back(IR(bd.D[static_cast<size_t>(a - 1)]));
  for (int b = 1; b <= wo.kL; ++b) out.push_back(IL(bd.G[static_cast<size_t>(b - 1)]));
  for (int a = 1; a <= wo.kR; ++a)
    for (int b = 1; b <= wo.kL; ++b) out.push_back(E(-a, b));
  return out;
}

namespace {

double strict_upper_residual(const Mat& A) {
  double worst = 0;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j <= i && j < A.cols(); ++j)
      worst = std::max(worst, std::abs(A(i, j)));
  return worst;
}

int nilpotency_index(const Mat& Y) {
  Index d = Y.rows();
  Mat pw = Mat::Identity(d, d);
  for (int nu = 1; nu <= d + 1; ++nu) {
    pw = pw * Y;
    if (pw.norm() < 1e-14) return nu;
  }
  return static_cast<int>(d) + 1;
}

int distinct_ratio_moduli(const Vec& lambda) {
  std::vector<double> vals;
  for (Index i = 0; i < lambda.size(); ++i)
    for (Index j = 0; j < lambda.size(); ++j)
      vals.push_back(std::abs(lambda(i) / lambda(j)));
  std::sort(vals.begin(), vals.end());
  int count = 0;
  double last = -1;
  for (double x : vals) {
    if (count == 0 || std::abs(x - last) > 1e-9 * std::max(1.0, x)) {
      ++count;
      last = x;
    }
  }
  return count;
}

double span_residual(const la::Subspace& span, const Mat& m) {
  Vec x = la::vec(m);
  double nx = x.norm();
  if (nx < 1e-300) return 0.0;
  Vec r = x - span.frame * (span.frame.adjoint() * x);
  return r.norm() / nx;
}

}  // namespace

TetradReport validate_tetrad(const Tetrad& t, double tol) {
  TetradReport rep;
  const int kR = t.wo.kR, kL = t.wo.kL;
  const Index d = t.dim();
  if (t.wo.lambda.size() != d)
    throw dimension_error("tetrad: lambda has wrong length");
  if (t.Y.rows() != d || t.Y.cols() != d)
    throw dimension_error("tetrad: Y is not " + std::to_string(d) + "x" +
                          std::to_string(d));
  if (static_cast<int>(t.bd.D.size()) != kR)
    throw dimension_error("tetrad: expected " + std::to_string(kR) +
                          " right boundary matrices");
  if (static_cast<int>(t.bd.G.size()) != kL)
    throw dimension_error("tetrad: expected " + std::to_string(kL) +
                          " left boundary matrices");
  for (int a = 1; a <= kR; ++a) {
    const Mat& Da = t.bd.D[static_cast<size_t>(a - 1)];
    if (Da.rows() != kR + 1 || Da.cols() != kR + 1)
      throw dimension_error("tetrad: D_" + std::to_string(a) + " is not " +
                            std::to_string(kR + 1) + "x" + std::to_string(kR + 1));
  }
  for (int b = 1; b <= kL; ++b) {
    const Mat& Gb = t.bd.G[static_cast<size_t>(b - 1)];
    if (Gb.rows() != kL + 1 || Gb.cols() != kL + 1)
      throw dimension_error("tetrad: G_" + std::to_string(b) + " is not " +
                            std::to_string(kL + 1) + "x" + std::to_string(kL + 1));
  }

  auto add = [&rep](const std::string& name, double residual, bool pass,
                    const std::string& note = "") {
    rep.checks.push_back({name, residual, pass, note});
    if (!pass && rep.failure.empty())
      rep.failure = note.empty() ? name : name + " (" + note + ")";
  };

  // weight ordering
  {
    auto errs = t.wo.check();
    std::string note;
    for (auto& e : errs) note += (note.empty() ? "" : "; ") + e;
    add("weight ordering", errs.empty() ? 0.0 : 1.0, errs.empty(), note);
  }

  // strict upper triangularity
  add("Y strictly upper triangular", strict_upper_residual(t.Y),
      strict_upper_residual(t.Y) <= tol);
  for (int a = 1; a <= kR; ++a) {
    double r = strict_upper_residual(t.bd.D[static_cast<size_t>(a - 1)]);
    add("D_" + std::to_string(a) + " strictly upper triangular", r, r <= tol);
  }
  for (int b = 1; b <= kL; ++b) {
    double r = strict_upper_residual(t.bd.G[static_cast<size_t>(b - 1)]);
    add("G_" + std::to_string(b) + " strictly upper triangular", r, r <= tol);
  }

  // corner normalizations and closure of the boundary spans
  for (int a = 1; a <= kR; ++a) {
    Mat E00 = la::unit(kR + 1, kR, kR);
    Mat target = la::unit(kR + 1, kR - a, kR);
    double r = (t.bd.D[static_cast<size_t>(a - 1)] * E00 - target).norm();
    add("right corner normalization D_" + std::to_string(a), r, r <= tol);
  }
  for (int b = 1; b <= kL; ++b) {
    Mat E00 = la::unit(kL + 1, 0, 0);
    Mat target = la::unit(kL + 1, 0, b);
    double r = (E00 * t.bd.G[static_cast<size_t>(b - 1)] - target).norm();
    add("left corner normalization G_" + std::to_string(b), r, r <= tol);
  }
  if (kR > 0) {
    la::Subspace spanD = la::orthonormal_span_mats(t.bd.D);
    double worst = 0;
    for (const auto& A : t.bd.D)
      for (const auto& B : t.bd.D)
        worst = std::max(worst, span_residual(spanD, A * B) *
                                     std::max(1.0, (A * B).norm()));
    add("right boundary span closed under products", worst, worst <= tol);
  }
  if (kL > 0) {
    la::Subspace spanG = la::orthonormal_span_mats(t.bd.G);
    double worst = 0;
    for (const auto& A : t.bd.G)
      for (const auto& B : t.bd.G)
        worst = std::max(worst, span_residual(spanG, A * B) *
                                     std::max(1.0, (A * B).norm()));
    add("left boundary span closed under products", worst, worst <= tol);
  }

  Mat Lam = t.wo.Lambda();
  // weight intertwining of the embedded boundary matrices
  for (int a = 1; a <= kR; ++a) {
    Mat IRD = t.IR(t.bd.D[static_cast<size_t>(a - 1)]);
    double r = (Lam * IRD - t.wo.lam(-a) * IRD * Lam).norm();
    add("weight intertwiner for D_" + std::to_string(a), r, r <= tol);
  }
  for (int b = 1; b <= kL; ++b) {
    Mat ILG = t.IL(t.bd.G[static_cast<size_t>(b - 1)]);
    double r = (Lam * ILG - (1.0 / t.wo.lam(b)) * ILG * Lam).norm();
    add("weight intertwiner for G_" + std::to_string(b), r, r <= tol);
  }
  // Y commutes with the weights and vanishes on the central corner
  {
    double r1 = (t.Y * Lam - Lam * t.Y).norm();
    add("Y commutes with weights", r1, r1 <= tol);
    double r2 = (t.PR() * t.Y * t.PL()).norm();
    add("Y vanishes on the central corner", r2, r2 <= tol);
  }

  // conjugation identity families at powers l = 1..L_check
  int L_check = std::min<int>(64, static_cast<int>(d) *
                                      (nilpotency_index(t.Y) + 1) *
                                      distinct_ratio_moduli(t.wo.lambda));
  L_check = std::max(L_check, 1);
  rep.L_check = L_check;
  {
    Mat M = t.M();
    Mat Mpow = Mat::Identity(d, d);
    double worst1 = 0, worst2 = 0;
    for (int l = 1; l <= L_check; ++l) {
      Mpow = Mpow * M;
      for (int a = 1; a <= kR; ++a) {
        Mat IRDa = t.IR(t.bd.D[static_cast<size_t>(a - 1)]);
        Mat lhs = Mpow * IRDa;
        Mat rhs = Mat::Zero(d, d);
        for (int ap = 1; ap <= kR; ++ap) {
          cd coeff = Mpow(-ap + kR, -a + kR);  // <f_{-a'}, M^l f_{-a}>
          rhs += coeff * t.IR(t.bd.D[static_cast<size_t>(ap - 1)]) * Mpow;
        }
        worst1 = std::max(worst1, (lhs - rhs).norm() / std::max(1.0, Mpow.norm()));
      }
      for (int b = 1; b <= kL; ++b) {
        Mat ILGb = t.IL(t.bd.G[static_cast<size_t>(b - 1)]);
        Mat lhs = ILGb * Mpow;
        Mat rhs = Mat::Zero(d, d);
        for (int bp = 1; bp <= kL; ++bp) {
          cd coeff = Mpow(b + kR, bp + kR);  // <f_b, M^l f_{b'}>
          rhs += coeff * Mpow * t.IL(t.bd.G[static_cast<size_t>(bp - 1)]);
        }
        worst2 = std::max(worst2, (lhs - rhs).norm() / std::max(1.0, Mpow.norm()));
      }
    }
    if (kR > 0) add("right conjugation identities", worst1, worst1 <= tol);
    if (kL > 0) add("left conjugation identities", worst2, worst2 <= tol);
  }

  // cross-check: the boundary subalgebra is invariant under conjugation by M
  {
    Mat M = t.M();
    Mat Minv = M.partialPivLu().solve(Mat::Identity(d, d));
    auto basis = t.algebra_basis();
    la::Subspace span = la::orthonormal_span_mats(basis);
    std::vector<Mat> conj_fwd, conj_bwd;
    for (const auto& b : basis) {
      conj_fwd.push_back(Minv * b * M);
      conj_bwd.push_back(M * b * Minv);
    }
    double dist = std::max(
        la::subspace_distance(span, la::orthonormal_span_mats(conj_fwd)),
        la::subspace_distance(span, la::orthonormal_span_mats(conj_bwd)));
    add("conjugation invariance of the boundary span", dist, dist <= 1e-9);
  }

  rep.accepted = true;
  for (auto& c : rep.checks) rep.accepted = rep.accepted && c.pass;
  return rep;
}

Mat ClassATuple::PhatR() const {
  return la::kron(Mat::Identity(n0, n0), tetrad.PR());
}

Mat ClassATuple::PhatL() const {
  return la::kron(Mat::Identity(n0, n0), tetrad.PL());
}

ClassATuple build_kappa_example(int n0, int kR, int kL, double kappa, int n) {
  if (n0 < 1) throw dimension_error("kappa example: n0 must be >= 1");
  if (kR < 0 || kL < 0) throw dimension_error("kappa example: kR, kL must be >= 0");
  if (!(kappa > 0 && kappa < 1))
    throw dimension_error("kappa example: kappa must lie in (0,1)");
  if (n < 2) throw dimension_error("kappa example: n must be >= 2");
  ClassATuple t;
  t.n = n;
  t.n0 = n0;
  t.tetrad.wo.kR = kR;
  t.tetrad.wo.kL = kL;
  Index d = kR + kL + 1;
  t.tetrad.wo.lambda = Vec(d);
  for (int i = -kR; i <= kL; ++i)
    t.tetrad.wo.lambda(i + kR) = std::pow(kappa, std::abs(i) * n0);
  t.tetrad.Y = Mat::Zero(d, d);
  Mat VR = Mat::Zero(kR + 1, kR + 1);
  for (int j = -kR; j <= -1; ++j) VR(j + kR, j + 1 + kR) = 1.0;
  Mat VL = Mat::Zero(kL + 1, kL + 1);
  for (int j = 0; j <= kL - 1; ++j) VL(j, j + 1) = 1.0;
  Mat pw = Mat::Identity(kR + 1, kR + 1);
  for (int a = 1; a <= kR; ++a) {
    pw = pw * VR;
    t.tetrad.bd.D.push_back(pw);
  }
  pw = Mat::Identity(kL + 1, kL + 1);
  for (int b = 1; b <= kL; ++b) {
    pw = pw * VL;
    t.tetrad.bd.G.push_back(pw);
  }
  Mat Lam = t.tetrad.wo.Lambda();
  Mat Lr = Mat::Zero(n0, n0);
  for (int al = 1; al <= n0; ++al) Lr(al - 1, al - 1) = std::pow(kappa, al - 1);
  Mat B1 = la::kron(Lr, Lam);
  Vec chi1 = Vec::Zero(n0);
  chi1(0) = 1.0;
  Vec eta = Vec::Zero(n0);
  for (int al = 2; al <= n0; ++al) eta(al - 1) = 1.0;
  Mat hop = chi1 * eta.adjoint() + eta * chi1.adjoint();
  Mat B2 = la::kron(hop, Lam) +
           la::kron(Lr, (t.tetrad.IR(VR) + t.tetrad.IL(VL)) * Lam);
  t.B.push_back(B1);
  t.B.push_back(B2);
  for (int mu = 3; mu <= n; ++mu)
    t.B.push_back(Mat::Zero(n0 * d, n0 * d));
  // Normalize to transfer spectral radius exactly 1 (a scalar rescale keeps
  // every span/structure condition intact; for n0 >= 2 the raw tuple needs it).
  double r = transfer::transfer_matrix_rep(t.B).spectral_radius;
  if (r <= 0) throw math_reject("kappa example: degenerate transfer radius");
  if (std::abs(r - 1.0) > 1e-13) {
    double scl = 1.0 / std::sqrt(r);
    for (auto& B : t.B) B *= scl;
  }
  return t;
}

ClassATuple builtin_aklt() {
  ClassATuple t;
  t.n = 3;
  t.n0 = 2;
  t.tetrad.wo.kR = 0;
  t.tetrad.wo.kL = 0;
  t.tetrad.wo.lambda = Vec::Ones(1);
  t.tetrad.Y = Mat::Zero(1, 1);
  double s23 = std::sqrt(2.0 / 3.0), s13 = std::sqrt(1.0 / 3.0);
  Mat vp(2, 2), v0(2, 2), vm(2, 2);
  vp << 0, s23, 0, 0;
  v0 << -s13, 0, 0, s13;
  vm << 0, 0, -s23, 0;
  t.B = {vp, v0, vm};
  return t;
}

la::Subspace monomial_span(const std::vector<Mat>& v, int l) {
  if (v.empty()) throw dimension_error("monomial_span: empty tuple");
  Index k = v[0].rows();
  if (l <= 0) {
    std::vector<Mat> id = {Mat::Identity(k, k)};
    return la::orthonormal_span_mats(id);
  }
  la::Subspace cur = la::orthonormal_span_mats(v);
  for (int step = 2; step <= l; ++step) {
    std::vector<Mat> next;
    next.reserve(v.size() * static_cast<size_t>(cur.dim()));
    for (Index j = 0; j < cur.dim(); ++j) {
      Mat Z = la::unvec(cur.frame.col(j), k, k);
      for (const auto& m : v) next.push_back(m * Z);
    }
    cur = la::orthonormal_span_mats(next);
  }
  return cur;
}

int compute_lB(const ClassATuple& t, int l_max, int persistence) {
  Index k = t.k();
  Mat M = t.tetrad.M();
  auto basis = t.tetrad.algebra_basis();
  Mat Mpow = Mat::Identity(t.tetrad.dim(), t.tetrad.dim());
  la::Subspace cur = la::orthonormal_span_mats(t.B);
  int candidate = -1;
  int consecutive = 0;
  for (int l = 1; l <= l_max + persistence; ++l) {
    Mpow = Mpow * M;
    if (l > 1) {
      std::vector<Mat> next;
      for (Index j = 0; j < cur.dim(); ++j) {
        Mat Z = la::unvec(cur.frame.col(j), k, k);
        for (const auto& m : t.B) next.push_back(m * Z);
      }
      cur = la::orthonormal_span_mats(next);
    }
    std::vector<Mat> target;
    for (int al = 0; al < t.n0; ++al)
      for (int be = 0; be < t.n0; ++be)
        for (const auto& b : basis)
          target.push_back(la::kron(la::unit(t.n0, al, be), b * Mpow));
    la::Subspace ts = la::orthonormal_span_mats(target);
    bool equal = la::subspace_distance(cur, ts) <= 1e-9;
    if (equal) {
      if (candidate < 0) candidate = l;
      ++consecutive;
      if (consecutive >= persistence + 1 && candidate <= l_max) return candidate;
    } else {
      candidate = -1;
      consecutive = 0;
    }
  }
  return -1;
}

MembershipReport validate_classa(const ClassATuple& t) {
  MembershipReport rep;
  Index k = t.k();
  if (static_cast<int>(t.B.size()) != t.n)
    throw dimension_error("tuple: expected " + std::to_string(t.n) +
                          " site matrices, got " + std::to_string(t.B.size()));
  for (size_t mu = 0; mu < t.B.size(); ++mu) {
    if (t.B[mu].rows() != k || t.B[mu].cols() != k)
      throw dimension_error("tuple: B_" + std::to_string(mu + 1) + " is not " +
                            std::to_string(k) + "x" + std::to_string(k));
  }
  rep.tetrad = validate_tetrad(t.tetrad);
  if (!rep.tetrad.accepted) {
    rep.failure = "tetrad: " + rep.tetrad.failure;
    return rep;
  }
  // membership of every site matrix in M_{n0} (x) (boundary span * M)
  Mat M = t.tetrad.M();
  std::vector<Mat> target;
  for (int al = 0; al < t.n0; ++al)
    for (int be = 0; be < t.n0; ++be)
      for (const auto& b : t.tetrad.algebra_basis())
        target.push_back(la::kron(la::unit(t.n0, al, be), b * M));
  la::Subspace ts = la::orthonormal_span_mats(target);
  bool member_ok = true;
  for (const auto& B : t.B) {
    double r = span_residual(ts, B);
    rep.span_residuals.push_back(r);
    if (r > 1e-9) member_ok = false;
  }
  if (!member_ok) {
    rep.failure = "site matrices leave the structured span";
    return rep;
  }
  rep.l_B = compute_lB(t);
  if (rep.l_B < 0) {
    rep.failure = "monomial span never stabilizes on the structured span";
    return rep;
  }
  transfer::TransferRep rr = transfer::transfer_matrix_rep(t.B);
  rep.transfer_radius = rr.spectral_radius;
  if (std::abs(rep.transfer_radius - 1.0) > 1e-8) {
    rep.failure = "transfer spectral radius " +
                  std::to_string(rep.transfer_radius) + " is not 1";
    return rep;
  }
  rep.member = true;
  return rep;
}

bool is_primitive(const std::vector<Mat>& v, int l_max, int* l_found) {
  Index k = v[0].rows();
  for (int l = 1; l <= l_max; ++l) {
    la::Subspace s = monomial_span(v, l);
    if (s.dim() == k * k) {
      // require stability at the next length as well
      if (l + 1 <= l_max + 1 && monomial_span(v, l + 1).dim() == k * k) {
        if (l_found) *l_found = l;
        return true;
      }
    }
  }
  return false;
}

BulkTuple extract_bulk_tuple(const ClassATuple& t, int l_max) {
  MembershipReport mem = validate_classa(t);
  if (!mem.member)
    throw math_reject("bulk extraction requires a member tuple: " + mem.failure);
  BulkTuple out;
  Index d = t.tetrad.dim();
  int z = t.tetrad.wo.kR;  // array position of block index 0
  for (const auto& B : t.B) {
    Mat w(t.n0, t.n0);
    for (int al = 0; al < t.n0; ++al)
      for (int be = 0; be < t.n0; ++be) w(al, be) = B(al * d + z, be * d + z);
    out.omega.push_back(w);
  }
  int lw = -1;
  out.primitive = is_primitive(out.omega, l_max, &lw);
  out.l_omega = lw;
  out.radius = transfer::transfer_matrix_rep(out.omega).spectral_radius;
  return out;
}

}  // namespace gaplab::model
