#include "gaplab/ground_space.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "gaplab/detail/words.hpp"

namespace gaplab::gspace {

namespace {

long long ipow(long long base, int e) {
  long long out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

// Orthonormal basis matrices of the corner p M_k q (or all matrix units when
// p and q are absent).
std::vector<Mat> corner_basis(Index k, const Mat& p, const Mat& q) {
  std::vector<Mat> out;
  if (p.size() == 0 && q.size() == 0) {
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < k; ++i) out.push_back(la::unit(k, i, j));
    return out;
  }
  la::EigH ep = la::eig_hermitian(p), eq = la::eig_hermitian(q);
  std::vector<Vec> pc, qc;
  for (Index i = 0; i < k; ++i) {
    if (ep.values(i) > 0.5) pc.push_back(ep.frame.col(i));
    if (eq.values(i) > 0.5) qc.push_back(eq.frame.col(i));
  }
  for (const auto& u : pc)
    for (const auto& w : qc) out.push_back(u * w.adjoint());
  return out;
}

}  // namespace

Vec gamma(const std::vector<Mat>& v, int l, const Mat& X) {
  if (v.empty()) throw dimension_error("gamma: empty tuple");
  Index k = v[0].rows();
  if (X.rows() != k || X.cols() != k)
    throw dimension_error("gamma: argument size mismatch");
  long long dim = ipow(static_cast<long long>(v.size()), l);
  Vec out(dim);
  Vec xv = la::vec(X);
  long long idx = 0;
  detail::for_each_word_product(v, l, [&](const std::vector<int>&, const Mat& prod) {
    // coefficient Tr(X prod^*) = <vec(prod), vec(X)>
    out(idx++) = Eigen::Map<const Vec>(prod.data(), prod.size()).dot(xv);
  });
  return out;
}

Mat gram_operator(const std::vector<Mat>& v, int N) {
  return gram_operator_profile(v, N).back();
}

std::vector<Mat> gram_operator_profile(const std::vector<Mat>& v, int N) {
  Index k = v[0].rows();
  std::vector<Mat> right_factors;  // vec(W v_nu) = (v_nu^T (x) 1) vec(W)
  for (const auto& m : v)
    right_factors.push_back(la::kron(m.transpose(), Mat::Identity(k, k)));
  std::vector<Mat> out;
  Mat cur = Mat::Zero(k * k, k * k);
  for (const auto& m : v) {
    Vec w = la::vec(m);
    cur += w * w.adjoint();
  }
  out.push_back(cur);
  for (int step = 2; step <= N; ++step) {
    Mat next = Mat::Zero(k * k, k * k);
    for (const auto& R : right_factors) next += R * cur * R.adjoint();
    cur = next;
    out.push_back(cur);
  }
  return out;
}

std::vector<Mat> orthonormal_preimages(const std::vector<Mat>& v, const Mat& p,
                                       const Mat& q, int N) {
  Index k = v[0].rows();
  std::vector<Mat> basis = corner_basis(k, p, q);
  Mat G = gram_operator(v, N);
  Index d = static_cast<Index>(basis.size());
  Mat B(k * k, d);
  for (Index j = 0; j < d; ++j) B.col(j) = la::vec(basis[static_cast<size_t>(j)]);
  Mat g = B.adjoint() * G * B;  // Gram matrix of the chain images
  la::EigH eg = la::eig_hermitian(g);
  double top = std::max(eg.values.maxCoeff(), 0.0);
  Mat half_inv = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (eg.values(i) <= 1e-12 * top)
      throw math_reject("orthonormal_preimages: chain map is not injective on the corner");
    half_inv += (1.0 / std::sqrt(eg.values(i))) * eg.frame.col(i) *
                eg.frame.col(i).adjoint();
  }
  std::vector<Mat> out;
  for (Index j = 0; j < d; ++j) {
    Mat Z = Mat::Zero(k, k);
    for (Index i = 0; i < d; ++i) Z += half_inv(i, j) * basis[static_cast<size_t>(i)];
    out.push_back(Z);
  }
  return out;
}

GammaFrame gamma_frame(const std::vector<Mat>& v, int l, const Mat& p,
                       const Mat& q, bool check_bijective) {
  GammaFrame out;
  out.l = l;
  Index k = v[0].rows();
  std::vector<Mat> basis = corner_basis(k, p, q);
  out.domain_dim = static_cast<Index>(basis.size());
  long long dim = ipow(static_cast<long long>(v.size()), l);
  Mat V(dim, out.domain_dim);
  for (Index j = 0; j < out.domain_dim; ++j)
    V.col(j) = gamma(v, l, basis[static_cast<size_t>(j)]);
  Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > la::default_rank_tol * smax && sv(i) > 0) ++rank;
  out.space.ambient = dim;
  out.space.frame = svd.matrixU().leftCols(rank);
  out.injective = (rank == out.domain_dim);
  if (out.injective) {
    for (Index j = 0; j < rank; ++j) {
      Mat Z = Mat::Zero(k, k);
      for (Index i = 0; i < out.domain_dim; ++i)
        Z += (svd.matrixV()(i, j) / sv(j)) * basis[static_cast<size_t>(i)];
      out.preimages.push_back(Z);
    }
  }
  bool corner_domain = (p.size() != 0 || q.size() != 0);
  if (check_bijective && corner_domain && dim * k * k <= (1 << 24)) {
    GammaFrame full = gamma_frame(v, l, Mat(), Mat(), false);
    out.bijective = out.injective &&
                    la::subspace_distance(out.space, full.space) <= 1e-9;
  } else if (!corner_domain) {
    out.bijective = out.injective;
  }
  return out;
}

int injectivity_threshold(const std::vector<Mat>& v, const Mat& p, const Mat& q,
                          int cap) {
  std::vector<bool> inj(static_cast<size_t>(cap) + 1, false);
  for (int M = 1; M <= cap; ++M)
    inj[static_cast<size_t>(M)] = gamma_frame(v, M, p, q, false).injective;
  int first = -1;
  for (int M = cap; M >= 1; --M) {
    if (inj[static_cast<size_t>(M)])
      first = M;
    else
      break;
  }
  return first;
}

IntersectionReport intersection_property(const std::vector<Mat>& v, int m,
                                         int N_max,
                                         const model::ClassATuple* classa,
                                         std::uint64_t seed) {
  IntersectionReport rep;
  rep.m = m;
  rep.N_max = N_max;
  const int n = static_cast<int>(v.size());
  Index k = v[0].rows();
  GammaFrame gm = gamma_frame(v, m, Mat(), Mat(), false);
  Mat hm = Mat::Identity(gm.space.ambient, gm.space.ambient) -
           gm.space.frame * gm.space.frame.adjoint();

  auto holds_at = [&](int mm, int N, const Mat& h) {
    long long dim = ipow(n, N);
    Mat H = Mat::Zero(dim, dim);
    long long left = 1;
    for (int x = 0; x + mm <= N; ++x) {
      long long right = ipow(n, N - mm - x);
      H += la::kron(la::kron(Mat::Identity(left, left), h),
                    Mat::Identity(right, right));
      left *= n;
    }
    la::EigH eh = la::eig_hermitian(H);
    double zero_tol = 1e-9 * std::max(eh.values(eh.values.size() - 1), 1.0);
    std::vector<Vec> kernel;
    for (Index i = 0; i < eh.values.size(); ++i)
      if (eh.values(i) <= zero_tol) kernel.push_back(eh.frame.col(i));
    la::Subspace ker = la::orthonormal_span(kernel);
    GammaFrame gn = gamma_frame(v, N, Mat(), Mat(), false);
    return la::subspace_distance(ker, gn.space);
  };

  rep.holds = true;
  for (int N = m; N <= N_max; ++N) {
    if (ipow(n, N) > 4096) break;
    rep.N_checked.push_back(N);
    double dist = holds_at(m, N, hm);
    rep.distances.push_back(dist);
    rep.holds = rep.holds && dist <= 1e-9;
  }

  // both recursion identities on random arguments
  la::Rng rng(seed);
  double worst = 0;
  int N_rec = std::min(N_max, 8);
  for (int t = 0; t < 3; ++t) {
    Mat X = rng.gauss_mat(k, k);
    Vec full = gamma(v, N_rec, X);
    Vec right = Vec::Zero(full.size());
    Vec left = Vec::Zero(full.size());
    for (int nu = 0; nu < n; ++nu) {
      Mat e = Mat::Zero(n, 1);
      e(nu, 0) = 1.0;
      Mat wr = gamma(v, N_rec - 1, X * v[static_cast<size_t>(nu)].adjoint());
      Mat wl = gamma(v, N_rec - 1, v[static_cast<size_t>(nu)].adjoint() * X);
      right += la::kron(wr, e).col(0);  // append the last site
      left += la::kron(e, wl).col(0);   // prepend the first site
    }
    double scale = std::max(full.norm(), 1e-300);
    worst = std::max(worst, (full - right).norm() / scale);
    worst = std::max(worst, (full - left).norm() / scale);
  }
  rep.recursion_residual = worst;

  if (classa) {
    rep.classa_checked = true;
    int lB = model::compute_lB(*classa);
    if (lB < 0) throw math_reject("intersection: tuple has no stable span length");
    Mat M = classa->tetrad.M();
    Mat Mp = Mat::Identity(M.rows(), M.cols());
    for (int i = 0; i < lB; ++i) Mp = Mp * M;
    Mat X2 = la::kron(Mat::Identity(classa->n0, classa->n0), Mp);
    Mat X2inv = X2.partialPivLu().solve(Mat::Identity(k, k));
    double worst_inc = 0;
    for (int N = lB; N <= lB + 2; ++N) {
      la::Subspace KN = model::monomial_span(v, N);
      la::Subspace KNp = model::monomial_span(v, N + lB);
      for (Index j = 0; j < KNp.dim(); ++j) {
        Mat W = la::unvec(KNp.frame.col(j), k, k);
        Mat conjW = X2inv * W;
        Vec x = la::vec(conjW);
        Vec r = x - KN.frame * (KN.frame.adjoint() * x);
        worst_inc = std::max(worst_inc, r.norm() / std::max(x.norm(), 1e-300));
      }
    }
    rep.classa_inclusion_residual = worst_inc;
  }

  // empirical smallest window size with the same property (dense sizes only)
  rep.empirical_m = -1;
  for (int mm = 1; mm <= m; ++mm) {
    GammaFrame gmm = gamma_frame(v, mm, Mat(), Mat(), false);
    Mat hmm = Mat::Identity(gmm.space.ambient, gmm.space.ambient) -
              gmm.space.frame * gmm.space.frame.adjoint();
    bool ok = true;
    bool any = false;
    for (int N = std::max(mm + 1, m); N <= N_max; ++N) {
      if (ipow(n, N) > 1024) break;
      any = true;
      if (holds_at(mm, N, hmm) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok && any) {
      rep.empirical_m = mm;
      break;
    }
  }
  return rep;
}

double OverlapReport::value() const {
  if (numeric) return *numeric;
  if (analytic) return *analytic;
  throw cap_exceeded("overlap: no value available at this size");
}

OverlapReport epsilon_overlap(const std::vector<Mat>& v, int l, int N,
                              const transfer::DecayConstants* dc, int m1,
                              Index dense_cap) {
  if (N < 2 * l)
    throw dimension_error("overlap: requires N >= 2l");
  OverlapReport rep;
  rep.l = l;
  rep.N = N;
  const int n = static_cast<int>(v.size());
  if (dc && l >= 1 && l - 1 <= dc->N_max) {
    double El = dc->E[static_cast<size_t>(l - 1)];
    rep.analytic = 2.0 * dc->F * El * (dc->F * dc->F * El + 1.0);
    rep.analytic_valid = (l - 1 >= dc->L) && (m1 < 0 || l - 1 >= m1);
  }
  long long amb = ipow(n, N + 1);
  if (amb <= static_cast<long long>(dense_cap)) {
    GammaFrame gN = gamma_frame(v, N, Mat(), Mat(), false);
    GammaFrame gN1 = gamma_frame(v, N + 1, Mat(), Mat(), false);
    GammaFrame gl = gamma_frame(v, l, Mat(), Mat(), false);
    Mat Gl = gl.space.frame * gl.space.frame.adjoint();
    Mat kFN = la::kron(gN.space.frame, Mat::Identity(n, n));
    Mat Z = kFN - gN1.space.frame * (gN1.space.frame.adjoint() * kFN);
    la::Subspace W = la::orthonormal_span_cols(Z);
    // apply 1 (x) G_l to each frame column via a reshape on the last l sites
    long long rows = ipow(n, l);
    long long cols = ipow(n, N + 1 - l);
    Mat applied(amb, W.dim());
    for (Index j = 0; j < W.dim(); ++j) {
      Eigen::Map<const Mat> wm(W.frame.col(j).data(), rows, cols);
      Mat tw = Gl * wm;
      applied.col(j) = Eigen::Map<const Vec>(tw.data(), amb);
    }
    rep.numeric = la::op_norm(applied);
  }
  return rep;
}

GramReport gram_estimates(const std::vector<Mat>& v, const Mat& p, const Mat& q,
                          const transfer::SpectralTripleII& t, int N,
                          int trials, std::uint64_t seed) {
  GramReport rep;
  rep.N = N;
  rep.trials = trials;
  Index k = v[0].rows();
  transfer::DecayConstants dc = [&] {
    try {
      return transfer::decay_constants(v, t, std::max(40, N));
    } catch (const cap_exceeded&) {
      // Slow profiles simply need a longer horizon before E drops below 1/2.
      return transfer::decay_constants(v, t, std::max(240, N));
    }
  }();
  double EN = dc.E[static_cast<size_t>(N)];
  Mat G = gram_operator(v, N);
  la::Rng rng(seed);
  double v_pair = -1e300, v_two = -1e300, v_norm = -1e300;
  for (int tr = 0; tr < trials; ++tr) {
    Mat X = p * rng.gauss_mat(k, k) * q;
    Mat Y = p * rng.gauss_mat(k, k) * q;
    Vec xv = la::vec(X), yv = la::vec(Y);
    cd gxy = (xv.adjoint() * G * yv)(0);
    double gxx = ((xv.adjoint() * G * xv)(0)).real();
    cd wxy = transfer::weighted_inner(t, X, Y);
    double wxx = transfer::weighted_inner(t, X, X).real();
    double wyy = transfer::weighted_inner(t, Y, Y).real();
    double scale = std::max({1.0, wxx, wyy});
    v_pair = std::max(v_pair, (std::abs(gxy - wxy) -
                               EN * std::sqrt(wxx) * std::sqrt(wyy)) /
                                  scale);
    v_two = std::max(v_two,
                     std::max((1.0 - EN) * wxx - gxx, gxx - (1.0 + EN) * wxx) /
                         std::max(1.0, wxx));
    if (N >= dc.L) {
      double lhs = la::hs_norm(X);
      double rhs = std::sqrt(2.0 / (dc.a * dc.c)) * std::sqrt(std::max(gxx, 0.0));
      v_norm = std::max(v_norm, (lhs - rhs) / std::max(1.0, rhs));
    }
  }
  rep.max_pairing_violation = v_pair;
  rep.max_twosided_violation = v_two;
  rep.max_norm_violation = (v_norm == -1e300) ? 0.0 : v_norm;
  rep.pass = rep.max_pairing_violation <= 1e-9 &&
             rep.max_twosided_violation <= 1e-9 &&
             rep.max_norm_violation <= 1e-9;
  return rep;
}

}  // namespace gaplab::gspace
