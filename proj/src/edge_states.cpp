#include "gaplab/edge_states.hpp"

#include <algorithm>
#include <cmath>

namespace gaplab::edge {

namespace {

long long ipow(long long base, int e) {
  long long out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

int infer_window_len(int n, Index rows) {
  long long d = 1;
  for (int l = 1; l <= 40; ++l) {
    d *= n;
    if (d == rows) return l;
    if (d > rows) break;
  }
  throw dimension_error("edge window: size " + std::to_string(rows) +
                        " is not a positive power of the site dimension");
}

constexpr long long kWordCap = 4096;

// Site-order products B_{w_0} B_{w_1} ... B_{w_{l-1}}, word index with the
// first site most significant.
std::vector<Mat> word_products(const std::vector<Mat>& B, int l) {
  const int n = static_cast<int>(B.size());
  const Index k = B[0].rows();
  long long count = ipow(n, l);
  if (count > kWordCap)
    throw cap_exceeded("edge window: " + std::to_string(count) +
                       " words exceed the enumeration cap");
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(count));
  out.push_back(Mat::Identity(k, k));
  for (int site = 0; site < l; ++site) {
    std::vector<Mat> next;
    next.reserve(out.size() * static_cast<size_t>(n));
    for (const Mat& prefix : out)
      for (int mu = 0; mu < n; ++mu) next.push_back(prefix * B[mu]);
    out = std::move(next);
  }
  return out;
}

Mat stack_vecs(const std::vector<Mat>& ms) {
  Mat out(ms[0].size(), static_cast<Index>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) out.col(static_cast<Index>(i)) = la::vec(ms[i]);
  return out;
}

// sum_{mu,nu} A(mu,nu) Bhat_nu^dagger core Bhat_mu
Mat map_with_core_L(const std::vector<Mat>& Bhat, const Mat& A, const Mat& core) {
  const Index k = core.rows();
  Mat Vb = stack_vecs(Bhat);
  Mat Svecs = Vb * A.adjoint();  // col mu = sum_nu conj(A(mu,nu)) vec(Bhat_nu)
  Mat out = Mat::Zero(k, k);
  for (size_t mu = 0; mu < Bhat.size(); ++mu)
    out += la::unvec(Svecs.col(static_cast<Index>(mu)), k, k).adjoint() *
           (core * Bhat[mu]);
  return out;
}

// sum_{mu,nu} A(mu,nu) Bhat_mu core Bhat_nu^dagger
Mat map_with_core_R(const std::vector<Mat>& Bhat, const Mat& A, const Mat& core) {
  const Index k = core.rows();
  Mat Vb = stack_vecs(Bhat);
  Mat Svecs = Vb * A.adjoint();
  Mat out = Mat::Zero(k, k);
  for (size_t mu = 0; mu < Bhat.size(); ++mu)
    out += Bhat[mu] * core *
           la::unvec(Svecs.col(static_cast<Index>(mu)), k, k).adjoint();
  return out;
}

// W(nu,mu) = Tr(K Bhat_nu^dagger rho Bhat_mu): dual window operator of
// A |-> Tr(K L(A)).
Mat window_density_L(const EdgeData& ed, const Mat& K, int l) {
  std::vector<Mat> Bhat = word_products(ed.t.B, l);
  Mat Vb = stack_vecs(Bhat);
  Mat G(Vb.rows(), Vb.cols());
  for (size_t mu = 0; mu < Bhat.size(); ++mu)
    G.col(static_cast<Index>(mu)) = la::vec(Mat(ed.triple.rho * Bhat[mu] * K));
  Mat W = Vb.adjoint() * G;
  return Mat(0.5 * (W + W.adjoint()));
}

// W(nu,mu) = Tr(e Bhat_nu^dagger K Bhat_mu): dual window operator of
// A |-> Tr(K R(A)).
Mat window_density_R(const EdgeData& ed, const Mat& K, int l) {
  std::vector<Mat> Bhat = word_products(ed.t.B, l);
  Mat Vb = stack_vecs(Bhat);
  Mat G(Vb.rows(), Vb.cols());
  for (size_t mu = 0; mu < Bhat.size(); ++mu)
    G.col(static_cast<Index>(mu)) = la::vec(Mat(K * Bhat[mu] * ed.triple.e));
  Mat W = Vb.adjoint() * G;
  return Mat(0.5 * (W + W.adjoint()));
}

Index big_index(const EdgeData& ed, Side side, Index small_idx) {
  const Index d = ed.t.tetrad.dim();
  const Index kR = ed.t.tetrad.wo.kR;
  const Index kL = ed.t.tetrad.wo.kL;
  const Index block = (side == Side::R) ? kR + 1 : kL + 1;
  Index alpha = small_idx / block;
  Index i = small_idx % block;
  return alpha * d + ((side == Side::R) ? i : kR + i);
}

Index small_dim(const EdgeData& ed, Side side) {
  const Index kside =
      (side == Side::R) ? ed.t.tetrad.wo.kR : ed.t.tetrad.wo.kL;
  return static_cast<Index>(ed.t.n0) * (kside + 1);
}

}  // namespace

EdgeData make_edge_data(const model::ClassATuple& t, int dc_N_max) {
  model::MembershipReport mem = model::validate_classa(t);
  if (!mem.member)
    throw math_reject("edge data: " + mem.failure);
  EdgeData ed;
  ed.t = t;
  ed.l_B = mem.l_B;
  ed.p = t.PhatR();
  ed.q = t.PhatL();
  ed.k = t.k();
  ed.n = t.n;
  ed.triple = transfer::fixed_point_triple(t.B, ed.p, ed.q);
  ed.dc = transfer::decay_constants(t.B, ed.triple, dc_N_max);
  return ed;
}

Mat embed_boundary(const EdgeData& ed, Side side, const Mat& small) {
  Index sd = small_dim(ed, side);
  if (small.rows() != sd || small.cols() != sd)
    throw dimension_error("embed_boundary: expected side " +
                          std::to_string(sd) + ", got " +
                          std::to_string(small.rows()));
  Mat big = Mat::Zero(ed.k, ed.k);
  for (Index r = 0; r < sd; ++r)
    for (Index c = 0; c < sd; ++c)
      big(big_index(ed, side, r), big_index(ed, side, c)) = small(r, c);
  return big;
}

Mat restrict_boundary(const EdgeData& ed, Side side, const Mat& big) {
  if (big.rows() != ed.k || big.cols() != ed.k)
    throw dimension_error("restrict_boundary: expected side " +
                          std::to_string(ed.k));
  Index sd = small_dim(ed, side);
  Mat small(sd, sd);
  for (Index r = 0; r < sd; ++r)
    for (Index c = 0; c < sd; ++c)
      small(r, c) = big(big_index(ed, side, r), big_index(ed, side, c));
  return small;
}

Mat edge_map(const EdgeData& ed, Side side, const Mat& A_window) {
  if (A_window.rows() != A_window.cols())
    throw dimension_error("edge_map: window observable must be square");
  int l = infer_window_len(ed.n, A_window.rows());
  std::vector<Mat> Bhat = word_products(ed.t.B, l);
  return side == Side::L ? map_with_core_L(Bhat, A_window, ed.triple.rho)
                         : map_with_core_R(Bhat, A_window, ed.triple.e);
}

cd xi_state(const EdgeData& ed, Side side, const Mat& sigma_small,
            const Mat& A_window, int pad) {
  if (pad < 0) throw dimension_error("xi_state: pad must be nonnegative");
  Index padd = ipow(ed.n, pad);
  Mat A_eff = (pad == 0)
                  ? A_window
                  : (side == Side::L
                         ? la::kron(A_window, Mat::Identity(padd, padd))
                         : la::kron(Mat::Identity(padd, padd), A_window));
  Mat core = edge_map(ed, side, A_eff);
  Mat half = (side == Side::L) ? la::psd_sqrt(ed.dc.y) : la::psd_sqrt(ed.dc.x);
  Mat dual = half * core * half;
  return (embed_boundary(ed, side, sigma_small).adjoint() * dual).trace();
}

Mat sigma_L_of_X(const EdgeData& ed, const Mat& X) {
  Mat rho_half = la::psd_sqrt(ed.triple.rho);
  cd phi = (ed.triple.rho * X.adjoint() * ed.triple.e * X).trace();
  if (std::abs(phi) < 1e-14)
    throw math_reject("sigma_L_of_X: null boundary vector");
  Mat big = rho_half * X.adjoint() * ed.triple.e * X * rho_half / phi.real();
  return restrict_boundary(ed, Side::L, big);
}

Mat sigma_R_of_X(const EdgeData& ed, const Mat& X) {
  Mat e_half = la::psd_sqrt(ed.triple.e);
  cd phi = (ed.triple.rho * X.adjoint() * ed.triple.e * X).trace();
  if (std::abs(phi) < 1e-14)
    throw math_reject("sigma_R_of_X: null boundary vector");
  Mat big = e_half * X * ed.triple.rho * X.adjoint() * e_half / phi.real();
  return restrict_boundary(ed, Side::R, big);
}

cd omega_infty(const EdgeData& ed, const Mat& A_window) {
  return (ed.triple.rho * edge_map(ed, Side::R, A_window)).trace();
}

cd omega_infty_pair(const EdgeData& ed, const Mat& A_window, int gap,
                    const Mat& C_window) {
  if (gap < 0) throw dimension_error("omega_infty_pair: gap must be nonnegative");
  int lC = infer_window_len(ed.n, C_window.rows());
  std::vector<Mat> BhatC = word_products(ed.t.B, lC);
  Mat core = map_with_core_R(BhatC, C_window, ed.triple.e);
  for (int g = 0; g < gap; ++g) core = transfer::apply_T(ed.t.B, core);
  int lA = infer_window_len(ed.n, A_window.rows());
  std::vector<Mat> BhatA = word_products(ed.t.B, lA);
  return (ed.triple.rho * map_with_core_R(BhatA, A_window, core)).trace();
}

WindowReport finite_chain_window(const EdgeData& ed, int m,
                                 const std::vector<int>& N_list, int l) {
  if (l < 1) throw dimension_error("finite_chain_window: window length >= 1");
  if (m < 1) throw dimension_error("finite_chain_window: interaction range >= 1");
  WindowReport rep;
  rep.l = l;
  rep.N_list = N_list;
  int max_tail = 0;
  for (int N : N_list) {
    if (N < l || N < ed.l_B)
      throw dimension_error(
          "finite_chain_window: chain size below the window or the "
          "stabilization length");
    max_tail = std::max(max_tail, N - l);
  }
  std::vector<Mat> grams =
      max_tail >= 1 ? gspace::gram_operator_profile(ed.t.B, max_tail)
                    : std::vector<Mat>();
  Mat gram0 = la::vec(Mat(Mat::Identity(ed.k, ed.k))) *
              la::vec(Mat(Mat::Identity(ed.k, ed.k))).adjoint();
  std::vector<Mat> heads = word_products(ed.t.B, l);
  const Index nw = static_cast<Index>(heads.size());
  for (int N : N_list) {
    std::vector<Mat> Z = gspace::orthonormal_preimages(ed.t.B, ed.p, ed.q, N);
    const Mat& M = (N - l == 0) ? gram0 : grams[static_cast<size_t>(N - l - 1)];
    Mat red = Mat::Zero(nw, nw);
    for (const Mat& Zi : Z) {
      Mat Psi(ed.k * ed.k, nw);
      for (Index a = 0; a < nw; ++a)
        Psi.col(a) = la::vec(Mat(heads[static_cast<size_t>(a)].adjoint() * Zi));
      red += Psi.adjoint() * M * Psi;
    }
    red /= double(Z.size());
    rep.reduced.push_back(Mat(0.5 * (red + red.adjoint())));
  }
  // Limiting window density: average of the right boundary-state window
  // densities over a weighted-orthonormal basis of the corner space.
  la::EigH ep = la::eig_hermitian(ed.p);
  la::EigH eq = la::eig_hermitian(ed.q);
  std::vector<Mat> basis;
  for (Index i = 0; i < ep.values.size(); ++i) {
    if (ep.values(i) < 0.5) continue;
    for (Index j = 0; j < eq.values.size(); ++j) {
      if (eq.values(j) < 0.5) continue;
      basis.push_back(Mat(ep.frame.col(i) * eq.frame.col(j).adjoint()));
    }
  }
  const Index dcorner = static_cast<Index>(basis.size());
  Mat g(dcorner, dcorner);
  for (Index a = 0; a < dcorner; ++a)
    for (Index b = 0; b < dcorner; ++b)
      g(a, b) = weighted_inner(ed.triple, basis[static_cast<size_t>(a)],
                               basis[static_cast<size_t>(b)]);
  la::EigH eg = la::eig_hermitian(Mat(0.5 * (g + g.adjoint())));
  double gtop = std::max(eg.values.maxCoeff(), 0.0);
  std::vector<Mat> ortho;
  for (Index j = 0; j < eg.values.size(); ++j) {
    if (eg.values(j) <= 1e-12 * std::max(gtop, 1.0)) continue;
    Mat Xj = Mat::Zero(ed.k, ed.k);
    for (Index i = 0; i < dcorner; ++i)
      Xj += eg.frame(i, j) * basis[static_cast<size_t>(i)];
    ortho.push_back(Mat(Xj / std::sqrt(eg.values(j))));
  }
  if (ortho.empty())
    throw math_reject("finite_chain_window: degenerate corner inner product");
  Mat S = Mat::Zero(ed.k, ed.k);
  for (const Mat& X : ortho) S += X * ed.triple.rho * X.adjoint();
  Mat e_half = la::psd_sqrt(ed.triple.e);
  Mat x_half = la::psd_sqrt(ed.dc.x);
  Mat Kbar = x_half * e_half * S * e_half * x_half / double(ortho.size());
  rep.limit = window_density_R(ed, Kbar, l);
  for (const Mat& red : rep.reduced)
    rep.trace_distances.push_back(la::trace_distance(red, rep.limit));
  rep.fit = la::fit_decay(rep.trace_distances, 2);
  for (int lp = 1; lp <= l; ++lp) {
    Mat D = window_density_R(ed, Kbar, lp);
    auto floor = la::min_nonzero_eig(D, 1e-10);
    rep.support_floor.push_back(floor ? *floor : 0.0);
  }
  return rep;
}

CorrelationReport correlation_decay(const EdgeData& ed, const Mat& A,
                                    const Mat& C, int r_max) {
  CorrelationReport rep;
  int lA = infer_window_len(ed.n, A.rows());
  rep.r_min = lA;
  cd wA = omega_infty(ed, A);
  cd wC = omega_infty(ed, C);
  for (int r = lA; r <= r_max; ++r)
    rep.values.push_back(std::abs(omega_infty_pair(ed, A, r - lA, C) - wA * wC));
  // A series that never rises above roundoff is a vanishing correlator, not a
  // decay profile; zero it so the fit reports "skipped" instead of noise.
  const double floor =
      1e-13 * std::max(1.0, la::op_norm(A) * la::op_norm(C));
  for (double& v : rep.values)
    if (v <= floor) v = 0.0;
  rep.fit = la::fit_decay(rep.values, 2);
  rep.fit_skipped = rep.fit.skipped;
  rep.transfer_second = ed.triple.s;
  rep.rate_accuracy = (rep.fit_skipped || ed.triple.s <= 0)
                          ? 0.0
                          : std::abs(rep.fit.s - ed.triple.s) / ed.triple.s;
  return rep;
}

TranslationOverlapReport translation_overlap(const EdgeData& ed,
                                             const Mat& sigma_small, int N_max,
                                             double tol) {
  TranslationOverlapReport rep;
  Mat rho_half = la::psd_sqrt(ed.triple.rho);
  Mat y_half = la::psd_sqrt(ed.dc.y);
  Mat K = y_half * embed_boundary(ed, Side::L, sigma_small) * y_half;
  for (int N = 0; N <= N_max; ++N) {
    Mat kappa = restrict_boundary(ed, Side::L, Mat(rho_half * K * rho_half));
    double ov = cd((sigma_small.adjoint() * kappa).trace()).real();
    rep.overlaps.push_back(ov);
    if (N >= 1 && !rep.found && ov > tol) {
      rep.found = true;
      rep.N = N;
    }
    K = transfer::apply_T(ed.t.B, K);
  }
  return rep;
}

double edge_distinguishability(const EdgeData& ed, Side side, const Mat& s1,
                               const Mat& s2) {
  Mat diff = s1 - s2;
  if (side == Side::L) {
    Mat y_half = la::psd_sqrt(ed.dc.y);
    Mat K = y_half * embed_boundary(ed, Side::L, diff) * y_half;
    return la::trace_norm(window_density_L(ed, K, ed.l_B));
  }
  Mat x_half = la::psd_sqrt(ed.dc.x);
  Mat K = x_half * embed_boundary(ed, Side::R, diff) * x_half;
  return la::trace_norm(window_density_R(ed, K, ed.l_B));
}

}  // namespace gaplab::edge
