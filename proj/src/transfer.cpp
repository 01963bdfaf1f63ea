#include "gaplab/transfer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaplab/detail/words.hpp"

namespace gaplab::transfer {

namespace {

using detail::for_each_word_product;

Mat p1_matrix(const SpectralTripleII& t) {
  return la::vec(t.e) * la::vec(t.rho).adjoint();
}

}  // namespace

TransferRep transfer_matrix_rep(const std::vector<Mat>& v) {
  if (v.empty()) throw dimension_error("transfer_matrix_rep: empty tuple");
  Index k = v[0].rows();
  for (const auto& m : v) {
    if (m.rows() != k || m.cols() != k)
      throw dimension_error("transfer_matrix_rep: tuple entries not square of equal size");
  }
  TransferRep out;
  out.k = k;
  out.That = Mat::Zero(k * k, k * k);
  for (const auto& m : v) out.That += la::kron(m.conjugate(), m);
  Eigen::ComplexEigenSolver<Mat> es(out.That);
  if (es.info() != Eigen::Success)
    throw math_reject("transfer_matrix_rep: eigensolver failed");
  out.eigenvalues.resize(static_cast<size_t>(k * k));
  for (Index i = 0; i < k * k; ++i)
    out.eigenvalues[static_cast<size_t>(i)] = es.eigenvalues()(i);
  out.spectral_radius = 0;
  for (auto& lam : out.eigenvalues)
    out.spectral_radius = std::max(out.spectral_radius, std::abs(lam));
  for (auto& lam : out.eigenvalues)
    if (std::abs(lam) > out.spectral_radius - peripheral_tol)
      out.peripheral.push_back(lam);
  return out;
}

Mat apply_T(const std::vector<Mat>& v, const Mat& X) {
  Mat out = Mat::Zero(X.rows(), X.cols());
  for (const auto& m : v) out += m * X * m.adjoint();
  return out;
}

Mat apply_T_adj(const std::vector<Mat>& v, const Mat& X) {
  Mat out = Mat::Zero(X.rows(), X.cols());
  for (const auto& m : v) out += m.adjoint() * X * m;
  return out;
}

std::vector<Mat> corner_tuple(const std::vector<Mat>& v, const Mat& p) {
  std::vector<Mat> out;
  out.reserve(v.size());
  for (const auto& m : v) out.push_back(p * m * p);
  return out;
}

double supop_norm_ub(const Mat& rep, Index k) {
  return std::sqrt(double(k)) * la::op_norm(rep);
}

SpectralTripleII fixed_point_triple(const std::vector<Mat>& v, const Mat& p,
                                    const Mat& q) {
  TransferRep rep = transfer_matrix_rep(v);
  Index k = rep.k;
  if (p.rows() != k || q.rows() != k)
    throw dimension_error("fixed_point_triple: projection size mismatch");
  if (std::abs(rep.spectral_radius - 1.0) > 1e-8)
    throw math_reject("not-spectral-II: spectral radius " +
                      std::to_string(rep.spectral_radius) + " is not 1");
  if (rep.peripheral.size() != 1)
    throw math_reject("not-spectral-II: peripheral eigenvalue is degenerate (" +
                      std::to_string(rep.peripheral.size()) + " on the peripheral circle)");
  if (std::abs(rep.peripheral[0] - cd(1, 0)) > 1e-8)
    throw math_reject("not-spectral-II: peripheral eigenvalue is not 1");

  Eigen::ComplexEigenSolver<Mat> es(rep.That);
  Eigen::ComplexEigenSolver<Mat> es_adj(rep.That.adjoint());
  auto pick_fixed_vec = [&](const Eigen::ComplexEigenSolver<Mat>& solver) {
    Index best = 0;
    double best_dist = 1e300;
    for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
      double d = std::abs(solver.eigenvalues()(i) - cd(1, 0));
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    return Vec(solver.eigenvectors().col(best));
  };

  auto hermitize_fixed_point = [&](const Vec& u, const char* which) {
    Mat E = la::unvec(u, k, k);
    cd tr = E.trace();
    if (std::abs(tr) < 1e-12 * E.norm())
      throw math_reject(std::string("not-spectral-II: traceless fixed point for ") + which);
    E *= std::conj(tr) / std::abs(tr);  // rotate so the trace is positive real
    Mat H = 0.5 * (E + E.adjoint());
    double herm_dev = (E - E.adjoint()).norm() / std::max(E.norm(), 1e-300);
    if (herm_dev > 1e-8)
      throw math_reject(std::string("not-spectral-II: fixed point for ") + which +
                        " is not Hermitian up to phase");
    la::EigH eh = la::eig_hermitian(H);
    double top = std::max(std::abs(eh.values(0)), std::abs(eh.values(k - 1)));
    if (eh.values(0) < -1e-8 * top)
      throw math_reject(std::string("not-spectral-II: fixed point for ") + which +
                        " is not PSD");
    Mat psd = Mat::Zero(k, k);
    for (Index i = 0; i < k; ++i)
      if (eh.values(i) > 0)
        psd += eh.values(i) * eh.frame.col(i) * eh.frame.col(i).adjoint();
    return psd;
  };

  SpectralTripleII out;
  out.k = k;
  out.That = rep.That;
  Mat e_raw = hermitize_fixed_point(pick_fixed_vec(es), "T");
  Mat rho_raw = hermitize_fixed_point(pick_fixed_vec(es_adj), "T*");
  rho_raw /= rho_raw.trace().real();
  cd pairing = (rho_raw * e_raw).trace();
  if (std::abs(pairing) < 1e-12)
    throw math_reject("not-spectral-II: fixed-point pairing vanishes");
  out.e = e_raw / pairing.real();
  out.rho = rho_raw;

  out.invariance_residual =
      std::max((apply_T(v, out.e) - out.e).norm() / std::max(out.e.norm(), 1e-300),
               (apply_T_adj(v, out.rho) - out.rho).norm() /
                   std::max(out.rho.norm(), 1e-300));
  if (out.invariance_residual > 1e-8)
    throw math_reject("not-spectral-II: fixed-point invariance residual " +
                      std::to_string(out.invariance_residual));

  out.support_e = la::support_and_pinv(out.e).support;
  out.support_rho = la::support_and_pinv(out.rho).support;
  if (la::op_norm(out.support_e - p) > 1e-9)
    throw math_reject("not-spectral-II: support of the right fixed point does not match p");
  if (la::op_norm(out.support_rho - q) > 1e-9)
    throw math_reject("not-spectral-II: support of the left fixed point does not match q");

  double second = 0;
  for (auto& lam : rep.eigenvalues) {
    double a = std::abs(lam);
    if (a <= rep.spectral_radius - peripheral_tol) second = std::max(second, a);
  }
  out.s = second;
  out.s_prime = 0.5 * (1.0 + second);
  Mat id = Mat::Identity(k * k, k * k);
  double res = 0;
  const int samples = 256;
  for (int i = 0; i < samples; ++i) {
    double th = 2.0 * std::numbers::pi * double(i) / double(samples);
    cd z = out.s_prime * cd(std::cos(th), std::sin(th));
    Mat R = (z * id - rep.That).partialPivLu().solve(id);
    res = std::max(res, la::op_norm(R));
  }
  out.resolvent_bound = 1.1 * res;  // margin for the sampled circle maximum
  return out;
}

Condition2Report check_condition2(const std::vector<Mat>& v, const Mat& p,
                                  const Mat& q, std::uint64_t seed,
                                  int growth_cap) {
  Condition2Report rep;
  Index k = v[0].rows();
  auto nrm = [](const Mat& m) { return la::op_norm(m); };
  auto add = [&rep](const std::string& name, double residual, bool pass,
                    const std::string& note) {
    rep.items.push_back({name, residual, pass, note});
  };

  // (i) commuting nonzero product of projections
  {
    double comm = nrm(p * q - q * p);
    double size = nrm(p * q);
    bool pass = comm <= 1e-10 && size > 1e-10;
    add("(i) pq = qp != 0", comm, pass,
        pass ? "" : (size <= 1e-10 ? "pq vanishes" : "pq does not commute"));
  }
  Mat pq = p * q;
  Mat pbar = Mat::Identity(k, k) - p;
  Mat qbar = Mat::Identity(k, k) - q;
  // (ii) v_mu p = p v_mu p
  {
    double worst = 0;
    for (const auto& m : v)
      worst = std::max(worst, nrm(m * p - p * m * p) / std::max(1.0, nrm(m)));
    add("(ii) v p = p v p", worst, worst <= 1e-10, "");
  }
  // (iii) q v_mu = q v_mu q
  {
    double worst = 0;
    for (const auto& m : v)
      worst = std::max(worst, nrm(q * m - q * m * q) / std::max(1.0, nrm(m)));
    add("(iii) q v = q v q", worst, worst <= 1e-10, "");
  }
  // (iv) the double-corner tuple converges to a rank-one map with supports pq
  {
    bool pass = true;
    std::string note = "pass (sampled)";
    double resid = 0;
    try {
      auto vc = corner_tuple(v, pq);
      SpectralTripleII tc = fixed_point_triple(vc, pq, pq);
      Mat P1 = p1_matrix(tc);
      Mat pw = Mat::Identity(k * k, k * k) - P1;
      std::vector<double> norms;
      for (int N = 1; N <= 30; ++N) {
        pw = tc.That * pw;
        norms.push_back(la::op_norm(pw));
      }
      la::DecayFit fit = la::fit_decay(norms, 2);
      resid = tc.invariance_residual;
      if (!fit.skipped && fit.s >= 1.0) {
        pass = false;
        note = "corner convergence is not exponential";
      }
    } catch (const math_reject& e) {
      pass = false;
      note = e.what();
    }
    add("(iv) double-corner convergence", resid, pass, note);
  }
  // (v)/(vi) complementary corners are strict contractions
  auto contraction_item = [&](const Mat& proj, const std::string& name) {
    auto vc = corner_tuple(v, proj);
    TransferRep rc = transfer_matrix_rep(vc);
    bool pass = rc.spectral_radius <= 1.0 - 1e-8;
    std::vector<double> norms;
    Mat pw = Mat::Identity(k * k, k * k);
    for (int N = 1; N <= 30; ++N) {
      pw = rc.That * pw;
      norms.push_back(supop_norm_ub(pw, k));
    }
    la::DecayFit fit = la::fit_decay(norms, 2);
    std::string note = "radius " + std::to_string(rc.spectral_radius);
    if (!fit.skipped)
      note += ", envelope C=" + std::to_string(fit.C) + " s=" + std::to_string(fit.s);
    add(name, rc.spectral_radius, pass, note);
  };
  contraction_item(qbar, "(v) q-complement contraction");
  contraction_item(pbar, "(vi) p-complement contraction");

  // (vii)/(viii) vector growth to the full corner subspace
  la::Rng rng(seed);
  Mat qf = la::support_and_pinv(q).support;  // = q, but reuse rank logic
  auto frame_of = [&](const Mat& proj) {
    la::EigH eh = la::eig_hermitian(proj);
    std::vector<Vec> cols;
    for (Index i = 0; i < eh.values.size(); ++i)
      if (eh.values(i) > 0.5) cols.push_back(eh.frame.col(i));
    Mat f(proj.rows(), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) f.col(static_cast<Index>(i)) = cols[i];
    return f;
  };
  auto growth_item = [&](bool adjoint_side, const Mat& proj, const std::string& name) {
    // basis of proj C^k, every element with nonvanishing pq-component
    Mat f = frame_of(proj);
    Index r = f.cols();
    // a column with maximal pq-component, used to repair degenerate ones
    Index best = 0;
    double best_n = -1;
    for (Index i = 0; i < r; ++i) {
      double c = (pq * f.col(i)).norm();
      if (c > best_n) {
        best_n = c;
        best = i;
      }
    }
    std::vector<Vec> candidates;
    for (Index i = 0; i < r; ++i) {
      Vec w = f.col(i);
      if ((pq * w).norm() <= 1e-8) w = (w + f.col(best)) / std::sqrt(2.0);
      candidates.push_back(w);
    }
    if (la::orthonormal_span(candidates).dim() != r) {
      add(name, 1.0, false, "could not construct a nondegenerate basis");
      return;
    }
    for (int t = 0; t < 10; ++t) {
      Vec w = proj * rng.gauss_vec(k);
      if ((pq * w).norm() > 1e-6 && w.norm() > 1e-6) candidates.push_back(w);
    }
    auto vc = corner_tuple(v, proj);
    bool all_ok = true;
    int worst_l = 0;
    for (const auto& w0 : candidates) {
      std::vector<Vec> cur = {w0 / w0.norm()};
      bool ok = false;
      for (int l = 1; l <= growth_cap; ++l) {
        std::vector<Vec> nxt;
        nxt.reserve(cur.size() * vc.size());
        for (const auto& w : cur)
          for (const auto& m : vc) nxt.push_back(adjoint_side ? Vec(m.adjoint() * w) : Vec(m * w));
        la::Subspace s = la::orthonormal_span(nxt);
        cur.clear();
        for (Index i = 0; i < s.dim(); ++i) cur.push_back(s.frame.col(i));
        if (s.dim() == r) {
          ok = true;
          worst_l = std::max(worst_l, l);
          break;
        }
      }
      if (!ok) {
        all_ok = false;
        break;
      }
    }
    add(name, 0.0, all_ok,
        all_ok ? ("pass (sampled), max l = " + std::to_string(worst_l))
               : "a sampled vector failed to reach the full corner space");
  };
  growth_item(true, qf, "(vii) adjoint-word growth on q");
  growth_item(false, la::support_and_pinv(p).support, "(viii) word growth on p");

  rep.all_pass = true;
  for (auto& it : rep.items) rep.all_pass = rep.all_pass && it.pass;
  return rep;
}

DecayConstants decay_constants(const std::vector<Mat>& v,
                               const SpectralTripleII& t, int N_max) {
  DecayConstants out;
  Index k = t.k;
  la::SupportPinv se = la::support_and_pinv(t.e);
  la::SupportPinv sr = la::support_and_pinv(t.rho);
  out.x = se.pinv;
  out.y = sr.pinv;
  out.a = 1.0 / la::op_norm(out.x);
  out.c = 1.0 / la::op_norm(out.y);
  out.N_max = N_max;
  double kk = double(k) * double(k);
  Mat P1 = p1_matrix(t);
  Mat pw = Mat::Identity(k * k, k * k) - P1;
  out.Etilde.resize(static_cast<size_t>(N_max) + 1);
  out.E.resize(static_cast<size_t>(N_max) + 1);
  double sup_norm = 0;
  for (int N = 0; N <= N_max; ++N) {
    if (N > 0) pw = t.That * pw;
    double nb = supop_norm_ub(pw, k);
    sup_norm = std::max(sup_norm, nb);
    out.Etilde[static_cast<size_t>(N)] = kk * nb;
    out.E[static_cast<size_t>(N)] = kk * nb / (out.a * out.c);
  }
  out.F = sup_norm + la::op_norm(t.e);
  // first N whose tail stays below 1/2, requiring a decaying sampled tail
  out.L = -1;
  double tail = 0;
  std::vector<double> suffix(static_cast<size_t>(N_max) + 1);
  for (int N = N_max; N >= 0; --N) {
    tail = std::max(tail, out.E[static_cast<size_t>(N)]);
    suffix[static_cast<size_t>(N)] = tail;
  }
  for (int N = 0; N <= N_max; ++N) {
    if (suffix[static_cast<size_t>(N)] < 0.5) {
      out.L = std::max(N, 1);
      break;
    }
  }
  if (out.L < 0 || out.E[static_cast<size_t>(N_max)] > 0.25)
    throw cap_exceeded("L-not-found: overlap profile does not decay below 1/2 on the sampled range");
  out.s_prime = t.s_prime;
  out.C_contour =
      kk * std::sqrt(double(k)) * t.s_prime * t.resolvent_bound / (out.a * out.c);
  std::vector<double> etail(out.E.begin() + 1, out.E.end());
  out.E_fit = la::fit_decay(etail, 2);
  return out;
}

cd weighted_inner(const SpectralTripleII& t, const Mat& X, const Mat& Y) {
  return (t.rho * X.adjoint() * t.e * Y).trace();
}

BasicCpReport basiccp_bounds_check(const std::vector<Mat>& v, const Mat& p,
                                   int N, int trials, std::uint64_t seed) {
  BasicCpReport rep;
  rep.N = N;
  rep.trials = trials;
  Index k = v[0].rows();
  int n = static_cast<int>(v.size());
  Mat pbar = Mat::Identity(k, k) - p;
  for (const auto& m : v) {
    if (la::op_norm(m * p - p * m * p) > 1e-10 * std::max(1.0, la::op_norm(m)))
      throw math_reject("basiccp: precondition v p = p v p fails");
  }
  auto vp = corner_tuple(v, p);
  auto vpb = corner_tuple(v, pbar);
  la::Rng rng(seed);
  double min_slack = 1e300;
  auto add = [&](const std::string& name, double residual, bool pass,
                 const std::string& note) {
    rep.items.push_back({name, residual, pass, note});
  };

  // Powers of the three maps applied to the identity, and trace profiles.
  std::vector<Mat> Tp_pow_id(static_cast<size_t>(N) + 1),
      Tpb_pow_id(static_cast<size_t>(N) + 1);
  Tp_pow_id[0] = Mat::Identity(k, k);
  Tpb_pow_id[0] = Mat::Identity(k, k);
  for (int i = 1; i <= N; ++i) {
    Tp_pow_id[static_cast<size_t>(i)] = apply_T(vp, Tp_pow_id[static_cast<size_t>(i - 1)]);
    Tpb_pow_id[static_cast<size_t>(i)] = apply_T(vpb, Tpb_pow_id[static_cast<size_t>(i - 1)]);
  }
  double sum_v2 = 0;
  for (const auto& m : v) {
    double nm = la::op_norm(m);
    sum_v2 += nm * nm;
  }

  // item 1: word identities (exhaustive for short words) and the two sum
  // identities evaluated as iterated maps on random inputs.
  {
    double worst = 0;
    int Nw = std::min(N, 5);
    for_each_word_product(v, Nw, [&](const std::vector<int>&, const Mat& prod) {
      worst = std::max(worst, (p * prod.adjoint() * pbar).norm());
      worst = std::max(
          worst, (pbar * prod.adjoint() * pbar - prod.adjoint() * pbar).norm());
    });
    for (int t = 0; t < trials; ++t) {
      Mat A = rng.gauss_mat(k, k);
      Mat full = A;
      for (int i = 0; i < N; ++i) full = apply_T(v, full);
      Mat lhs_sum1 = pbar * full * pbar;
      Mat rhs_sum1 = A;
      for (int i = 0; i < N; ++i) rhs_sum1 = apply_T(vpb, rhs_sum1);
      worst = std::max(worst,
                       (lhs_sum1 - rhs_sum1).norm() / std::max(1.0, A.norm()));
      Mat lhs_sum2 = p * A * p;
      for (int i = 0; i < N; ++i) lhs_sum2 = apply_T(v, lhs_sum2);
      Mat rhs_sum2 = A;
      for (int i = 0; i < N; ++i) rhs_sum2 = apply_T(vp, rhs_sum2);
      worst = std::max(worst, (lhs_sum2 - rhs_sum2).norm() /
                                  std::max(1.0, A.norm()));
    }
    add("1: block word identities", worst, worst <= 1e-9,
        "exhaustive words to length " + std::to_string(std::min(N, 5)));
  }

  // item 2
  {
    double worst_slack = 1e300;
    Mat tb = pbar;  // T^N(pbar), reused across trials
    for (int i = 0; i < N; ++i) tb = apply_T(v, tb);
    for (int t = 0; t < trials; ++t) {
      Vec eta = rng.gauss_vec(k);
      Vec peta = p * eta;
      double lhs = (peta.adjoint() * tb * peta)(0).real();
      double sum = 0;
      for (int m = 1; m <= N; ++m) {
        double tr = Tpb_pow_id[static_cast<size_t>(N - m)].trace().real();
        double qd = (eta.adjoint() * Tp_pow_id[static_cast<size_t>(m - 1)] * eta)(0).real();
        sum += std::sqrt(std::max(tr, 0.0)) * std::sqrt(std::max(qd, 0.0));
      }
      double rhs = sum * sum * sum_v2;
      double slack = rhs - lhs;
      worst_slack = std::min(worst_slack, slack);
    }
    min_slack = std::min(min_slack, worst_slack);
    add("2: escape-weight inequality", worst_slack, worst_slack >= -1e-9, "");
  }

  // Superoperator sup factors over a finite sample window (upper bounds).
  int M_cap = std::max(64, 2 * N);
  auto sampled_sup = [&](const std::vector<Mat>& tuple) {
    TransferRep r = transfer_matrix_rep(tuple);
    Mat pw = Mat::Identity(k * k, k * k);
    double sup = 0;
    for (int M = 1; M <= M_cap; ++M) {
      pw = r.That * pw;
      sup = std::max(sup, supop_norm_ub(pw, k));
    }
    return sup;
  };
  double sup_Tp = sampled_sup(vp);
  double sup_Tpb = sampled_sup(vpb);

  // item 3
  {
    double worst_slack = 1e300;
    double norm_Tpb_N = la::op_norm(Tpb_pow_id[static_cast<size_t>(N)]);
    double series = 0;
    for (int m = 1; m <= N; ++m) {
      double tr = Tpb_pow_id[static_cast<size_t>(N - m)].trace().real();
      series += std::sqrt(std::max(tr, 0.0)) *
                std::sqrt(la::op_norm(Tp_pow_id[static_cast<size_t>(m - 1)]));
    }
    for (int t = 0; t < trials; ++t) {
      Mat A = rng.gauss_mat(k, k);
      Mat TA = A;
      for (int i = 0; i < N; ++i) TA = apply_T(v, TA);
      double lhs = la::op_norm(TA - p * TA * p);
      double rhs = 2.0 * la::op_norm(A) * std::sqrt(norm_Tpb_N) *
                   (std::sqrt(sup_Tp) + std::sqrt(sup_Tpb) +
                    series * std::sqrt(sum_v2));
      worst_slack = std::min(worst_slack, rhs - lhs);
    }
    min_slack = std::min(min_slack, worst_slack);
    add("3: corner-compression inequality", worst_slack, worst_slack >= -1e-9,
        "sup factors sampled to M = " + std::to_string(M_cap));
  }

  // item 4 (LHS bracketed from below, RHS from above)
  {
    TransferRep r_full = transfer_matrix_rep(v);
    Mat pw = Mat::Identity(k * k, k * k);
    double lhs_lb = 0;
    for (int M = 1; M <= M_cap; ++M) {
      pw = r_full.That * pw;
      lhs_lb = std::max(lhs_lb, la::op_norm(pw) / std::sqrt(double(k)));
    }
    // the M-indexed series factors, jointly maximized over M
    double sup_prod = 0, sup_series_sq = 0;
    std::vector<Mat> Tpb_id_ext(static_cast<size_t>(M_cap) + 1),
        Tp_id_ext(static_cast<size_t>(M_cap) + 1);
    Tpb_id_ext[0] = Mat::Identity(k, k);
    Tp_id_ext[0] = Mat::Identity(k, k);
    for (int i = 1; i <= M_cap; ++i) {
      Tpb_id_ext[static_cast<size_t>(i)] =
          apply_T(vpb, Tpb_id_ext[static_cast<size_t>(i - 1)]);
      Tp_id_ext[static_cast<size_t>(i)] =
          apply_T(vp, Tp_id_ext[static_cast<size_t>(i - 1)]);
    }
    Mat pbar_pow = pbar;
    for (int M = 1; M <= M_cap; ++M) {
      double series = 0;
      for (int m = 1; m <= M; ++m) {
        double tr = Tpb_id_ext[static_cast<size_t>(M - m)].trace().real();
        series += std::sqrt(std::max(tr, 0.0)) *
                  std::sqrt(la::op_norm(Tp_id_ext[static_cast<size_t>(m - 1)]));
      }
      pbar_pow = apply_T(vpb, pbar_pow);  // T^M applied to the complement
      double tail = la::op_norm(pbar_pow);
      sup_prod = std::max(sup_prod, series * std::sqrt(tail));
      sup_series_sq = std::max(sup_series_sq, series * series);
    }
    double rhs = sup_Tp + sup_Tpb + 2.0 * sup_prod * std::sqrt(sum_v2) +
                 sup_series_sq * sum_v2;
    double slack = rhs - lhs_lb;
    min_slack = std::min(min_slack, slack);
    add("4: power-norm budget", slack, slack >= -1e-9,
        "operator norms bracketed by Hilbert-Schmidt bounds");
  }

  rep.min_slack = min_slack;
  rep.all_pass = true;
  for (auto& it : rep.items) rep.all_pass = rep.all_pass && it.pass;
  return rep;
}

}  // namespace gaplab::transfer
