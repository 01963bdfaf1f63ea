#include "gaplab/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace gaplab::ham {

namespace {

long long ipow(long long base, int e) {
  long long out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Mat build_H(const std::vector<Mat>& v, int m, int N, Index dense_cap) {
  const int n = static_cast<int>(v.size());
  if (m < 1 || N < m) throw dimension_error("build_H: requires 1 <= m <= N");
  long long dim = ipow(n, N);
  if (dim > dense_cap)
    throw cap_exceeded("build_H: dense matrix would have side " +
                       std::to_string(dim) + "; use the operator form");
  gspace::GammaFrame gm = gspace::gamma_frame(v, m, Mat(), Mat(), false);
  long long wdim = gm.space.ambient;
  Mat h = Mat::Identity(wdim, wdim) -
          gm.space.frame * gm.space.frame.adjoint();
  Mat H = Mat::Zero(dim, dim);
  for (int x = 0; x + m <= N; ++x) {
    long long left = ipow(n, x);
    long long right = ipow(n, N - m - x);
    H += la::kron(la::kron(Mat::Identity(left, left), h),
                  Mat::Identity(right, right));
  }
  return H;
}

Vec HApply::operator()(const Vec& w) const {
  const long long terms = N - m + 1;
  Vec out = double(terms) * w;
  Mat Fc = Fm.conjugate();
  Mat Ft = Fm.transpose();
  for (int x = 0; x + m <= N; ++x) {
    long long lead = ipow(n, x);
    long long rows = ipow(n, N - m - x);  // trailing sites
    long long wcols = ipow(n, m);
    long long slice = rows * wcols;
    for (long long a = 0; a < lead; ++a) {
      Eigen::Map<const Mat> Min(w.data() + a * slice, rows, wcols);
      Mat proj = (Min * Fc) * Ft;  // window projector transpose action
      Eigen::Map<Mat>(out.data() + a * slice, rows, wcols) -= proj;
    }
  }
  return out;
}

HApply make_h_apply(const std::vector<Mat>& v, int m, int N) {
  HApply h;
  h.n = static_cast<int>(v.size());
  h.m = m;
  h.N = N;
  h.dim = ipow(h.n, N);
  h.Fm = gspace::gamma_frame(v, m, Mat(), Mat(), false).space.frame;
  return h;
}

LanczosResult lanczos_min_eig(const std::function<Vec(const Vec&)>& apply,
                              Index dim, const Mat& deflate, int max_iter,
                              double tol, std::uint64_t seed) {
  LanczosResult res;
  la::Rng rng(seed);
  auto project_out = [&](Vec& w) {
    if (deflate.cols() > 0) w -= deflate * (deflate.adjoint() * w);
  };
  const int cycle_len = std::min(max_iter, 140);
  Vec start = rng.gauss_vec(dim);
  project_out(start);
  if (start.norm() < 1e-12) throw math_reject("lanczos: start vector vanished");
  start /= start.norm();
  int total_iter = 0;
  double theta = 0, resid = 1e300;
  for (int cycle = 0; cycle < 8 && total_iter < max_iter; ++cycle) {
    std::vector<Vec> Q;
    std::vector<double> alpha, beta;  // tridiagonal entries
    Vec q = start;
    Vec q_prev = Vec::Zero(dim);
    double beta_prev = 0;
    int j = 0;
    for (; j < cycle_len && total_iter < max_iter; ++j, ++total_iter) {
      Q.push_back(q);
      Vec w = apply(q);
      project_out(w);
      cd a = q.dot(w);
      alpha.push_back(a.real());
      w -= a.real() * q;
      if (beta_prev > 0) w -= beta_prev * q_prev;
      // full reorthogonalization (twice for stability); re-project against
      // the deflation space afterwards, otherwise the alpha/beta updates
      // leak deflated components back in and they grow exponentially
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& qq : Q) w -= qq * qq.dot(w);
      project_out(w);
      double b = w.norm();
      beta.push_back(b);
      // smallest Ritz value of the current tridiagonal
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
      for (int i = 0; i <= j; ++i) {
        T(i, i) = alpha[static_cast<size_t>(i)];
        if (i < j) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      theta = es.eigenvalues()(0);
      resid = b * std::abs(es.eigenvectors()(j, 0));
      double scale = std::max(std::abs(es.eigenvalues()(j)), 1.0);
      if (resid <= tol * scale) {
        res.value = theta;
        res.residual = resid;
        res.iterations = total_iter + 1;
        res.converged = true;
        return res;
      }
      if (b < 1e-13) break;  // invariant subspace exhausted
      q_prev = q;
      q = w / b;
      beta_prev = b;
    }
    // restart from the best Ritz vector
    if (!Q.empty()) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Index>(Q.size()),
                                                static_cast<Index>(Q.size()));
      for (size_t i = 0; i < Q.size(); ++i) {
        T(static_cast<Index>(i), static_cast<Index>(i)) = alpha[i];
        if (i + 1 < Q.size())
          T(static_cast<Index>(i), static_cast<Index>(i) + 1) =
              T(static_cast<Index>(i) + 1, static_cast<Index>(i)) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      Vec y = Vec::Zero(dim);
      for (size_t i = 0; i < Q.size(); ++i)
        y += es.eigenvectors()(static_cast<Index>(i), 0) * Q[i];
      project_out(y);
      if (y.norm() < 1e-12) break;
      start = y / y.norm();
    }
  }
  res.value = theta;
  res.residual = resid;
  res.iterations = total_iter;
  res.converged = resid <= tol * std::max(std::abs(theta), 1.0) * 100;
  return res;
}

SpectrumReport exact_spectrum(const std::vector<Mat>& v, int m, int N,
                              Index dense_cap_vec, Index dense_cap_mat) {
  SpectrumReport rep;
  rep.m = m;
  rep.N = N;
  const int n = static_cast<int>(v.size());
  long long dim = ipow(n, N);
  rep.dim = dim;
  if (dim > dense_cap_vec)
    throw cap_exceeded("exact_spectrum: chain dimension " + std::to_string(dim) +
                       " exceeds the configured cap");
  gspace::GammaFrame gN = gspace::gamma_frame(v, N, Mat(), Mat(), false);
  if (dim <= dense_cap_mat) {
    rep.method = "dense";
    Mat H = build_H(v, m, N, dense_cap_mat);
    la::EigH eh = la::eig_hermitian(H);
    double hnorm = std::max(eh.values(eh.values.size() - 1), 0.0);
    rep.zero_tol = 1e-9 * std::max(hnorm, 1.0);
    rep.ground_energy = eh.values(0);
    std::vector<Vec> ker;
    for (Index i = 0; i < eh.values.size(); ++i) {
      if (eh.values(i) <= rep.zero_tol)
        ker.push_back(eh.frame.col(i));
      else if (!rep.gap) {
        rep.gap = eh.values(i);
      }
    }
    rep.kernel = la::orthonormal_span(ker);
    rep.kernel_dim = rep.kernel.dim();
    rep.kernel_gamma_distance = la::subspace_distance(rep.kernel, gN.space);
    rep.kernel_matches_gamma = rep.kernel_gamma_distance <= 1e-9;
    double worst = 0;
    for (Index i = 0; i < rep.kernel.dim(); ++i)
      worst = std::max(worst, (H * rep.kernel.frame.col(i)).norm());
    rep.kernel_residual = worst;
    return rep;
  }
  rep.method = "lanczos";
  HApply happly = make_h_apply(v, m, N);
  auto apply = [&](const Vec& w) { return happly(w); };
  double hnorm_ub = double(N - m + 1);
  rep.zero_tol = 1e-9 * hnorm_ub;
  double worst = 0;
  for (Index i = 0; i < gN.space.dim(); ++i)
    worst = std::max(worst, apply(gN.space.frame.col(i)).norm());
  rep.kernel_residual = worst;
  rep.kernel = gN.space;
  rep.kernel_dim = gN.space.dim();
  rep.kernel_gamma_distance = 0.0;
  rep.kernel_matches_gamma = worst <= rep.zero_tol;
  if (rep.kernel_matches_gamma) {
    double rayleigh = 0;
    for (Index i = 0; i < gN.space.dim(); ++i) {
      Vec f = gN.space.frame.col(i);
      rayleigh = std::max(rayleigh, std::abs(cd(f.dot(apply(f))).real()));
    }
    rep.ground_energy = rayleigh;  // ~0, bounded by the kernel residual
    LanczosResult lr = lanczos_min_eig(apply, dim, gN.space.frame, 300, 1e-10);
    if (!lr.converged)
      throw cap_exceeded("exact_spectrum: eigensolver did not converge at size " +
                         std::to_string(dim));
    rep.gap = std::max(lr.value - lr.residual, 0.0);
  } else {
    LanczosResult lr = lanczos_min_eig(apply, dim, Mat(dim, 0), 300, 1e-10);
    rep.ground_energy = lr.value;
    rep.gap.reset();
  }
  return rep;
}

GapCertificate gap_certificate(const std::vector<Mat>& v, int m, int l,
                               const transfer::DecayConstants& dc, int m1,
                               Index dense_cap_vec) {
  if (l < m) throw dimension_error("gap_certificate: requires l >= m");
  GapCertificate cert;
  cert.m = m;
  cert.l = l;
  cert.valid_from = 2 * l + 1;
  SpectrumReport s1 = exact_spectrum(v, m, l, dense_cap_vec);
  SpectrumReport s2 = exact_spectrum(v, m, 2 * l, dense_cap_vec);
  if (!s1.gap || !s2.gap)
    throw math_reject("gap_certificate: missing a nonzero eigenvalue at the base sizes");
  cert.gamma_lm = std::min(*s1.gap, *s2.gap);
  // epsilon: exact overlap norms on a sampled window of sizes, else the
  // uniform analytic bound
  double eps_num = -1;
  for (int N = 2 * l; N <= 2 * l + 2; ++N) {
    long long amb = ipow(static_cast<long long>(v.size()), N + 1);
    if (amb > static_cast<long long>(dense_cap_vec)) break;
    gspace::OverlapReport ov = gspace::epsilon_overlap(v, l, N, &dc, m1, dense_cap_vec);
    if (ov.numeric) {
      eps_num = std::max(eps_num, *ov.numeric);
      if (!cert.eps_numeric || *cert.eps_numeric < eps_num)
        cert.eps_numeric = eps_num;
    }
    if (ov.analytic && ov.analytic_valid) cert.eps_analytic = *ov.analytic;
  }
  if (!cert.eps_analytic) {
    gspace::OverlapReport ov = gspace::epsilon_overlap(v, l, 2 * l, &dc, m1, 0);
    if (ov.analytic && ov.analytic_valid) cert.eps_analytic = *ov.analytic;
  }
  if (cert.eps_numeric) {
    cert.epsilon = *cert.eps_numeric;
    cert.epsilon_source = "numeric";
  } else if (cert.eps_analytic) {
    cert.epsilon = *cert.eps_analytic;
    cert.epsilon_source = "analytic";
  } else {
    throw cap_exceeded("gap_certificate: no overlap value available at l = " +
                       std::to_string(l));
  }
  double root = cert.epsilon * std::sqrt(double(l));
  if (root >= 1.0)
    throw math_reject("martingale-fails-at-l: overlap " +
                      std::to_string(cert.epsilon) + " at l = " + std::to_string(l));
  cert.bound = (cert.gamma_lm / double(l + 2)) * (1.0 - root) * (1.0 - root);
  return cert;
}

}  // namespace gaplab::ham
