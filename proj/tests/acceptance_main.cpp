// Acceptance suite: nine end-to-end checks over the built-in instances, one
// verdict line per check. Exit status is the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gaplab/edge_states.hpp"
#include "gaplab/hamiltonian.hpp"

using namespace gaplab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

model::ClassATuple e1() { return model::build_kappa_example(1, 1, 1, 0.5, 2); }

transfer::DecayConstants decay_for(const model::ClassATuple& t,
                                   const transfer::SpectralTripleII& tr) {
  try {
    return transfer::decay_constants(t.B, tr, 60);
  } catch (const cap_exceeded&) {
    return transfer::decay_constants(t.B, tr, 240);
  }
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

// --- 1: membership pipeline on the three built-in family instances ---------
Outcome criterion1() {
  struct Inst {
    const char* name;
    int n0, kR, kL;
    double kappa;
    int n;
  };
  const Inst insts[] = {{"E1", 1, 1, 1, 0.5, 2},
                        {"E2", 2, 1, 0, 0.5, 2},
                        {"E3", 1, 0, 2, 0.5, 2}};
  Outcome out;
  out.pass = true;
  std::ostringstream d;
  for (const Inst& in : insts) {
    auto t0 = std::chrono::steady_clock::now();
    model::ClassATuple t =
        model::build_kappa_example(in.n0, in.kR, in.kL, in.kappa, in.n);
    model::MembershipReport mem = model::validate_classa(t);
    double secs = seconds_since(t0);
    bool ok = mem.member && mem.l_B >= 0 && secs < 5.0;
    if (std::string(in.name) == "E1" && mem.l_B != 2) ok = false;
    out.pass = out.pass && ok;
    d << in.name << ": member=" << (mem.member ? "yes" : "no")
      << " l_B=" << mem.l_B << " t=" << fmt(secs) << "s; ";
  }
  out.detail = d.str();
  return out;
}

// --- 2: kernel dimension law and kernel identification ----------------------
Outcome criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  model::ClassATuple t = e1();
  Outcome out;
  out.pass = true;
  double worst = 0;
  for (int N = 4; N <= 10; ++N) {
    ham::SpectrumReport sp = ham::exact_spectrum(t.B, 4, N);
    worst = std::max(worst, sp.kernel_gamma_distance);
    if (sp.kernel_dim != 4 || sp.kernel_gamma_distance > 1e-9)
      out.pass = false;
  }
  double secs = seconds_since(t0);
  if (secs >= 60.0) out.pass = false;
  out.detail = "N=4..10 kernel dim 4, max distance " + fmt(worst) + ", t=" +
               fmt(secs) + "s";
  return out;
}

// --- 3: certificate soundness against exact gaps ----------------------------
Outcome criterion3() {
  Outcome out;
  out.pass = true;
  std::ostringstream d;
  struct Case {
    const char* name;
    model::ClassATuple t;
    int m;
    int N_hi;  // largest chain length checked against the bound
  };
  std::vector<Case> cases;
  cases.push_back({"E1", e1(), 4, 14});
  cases.push_back({"AKLT", model::builtin_aklt(), 2, 8});
  for (Case& c : cases) {
    transfer::SpectralTripleII tr =
        transfer::fixed_point_triple(c.t.B, c.t.PhatR(), c.t.PhatL());
    transfer::DecayConstants dc = decay_for(c.t, tr);
    model::MembershipReport mem = model::validate_classa(c.t);
    ham::GapCertificate cert;
    bool got = false;
    for (int l = std::max(c.m, mem.l_B); l <= c.m + 8 && !got; ++l) {
      try {
        cert = ham::gap_certificate(c.t.B, c.m, l, dc, mem.l_B);
        got = true;
      } catch (const math_reject&) {
      }
    }
    if (!got) {
      out.pass = false;
      d << c.name << ": no certificate; ";
      continue;
    }
    bool ok = cert.bound > 0 && cert.epsilon < 1.0 / std::sqrt(double(cert.l));
    double min_slack = 1e300;
    for (int N = cert.valid_from; N <= c.N_hi; ++N) {
      ham::SpectrumReport sp = ham::exact_spectrum(c.t.B, c.m, N);
      if (!sp.gap) {
        ok = false;
        break;
      }
      min_slack = std::min(min_slack, *sp.gap - cert.bound);
      if (cert.bound > *sp.gap + 1e-9) ok = false;
    }
    out.pass = out.pass && ok;
    d << c.name << ": l=" << cert.l << " bound=" << fmt(cert.bound)
      << " eps=" << fmt(cert.epsilon) << " min gap slack=" << fmt(min_slack)
      << "; ";
  }
  out.detail = d.str();
  return out;
}

// --- 4: channel convergence bound and fixed-point supports ------------------
Outcome criterion4() {
  model::ClassATuple t = e1();
  transfer::SpectralTripleII tr =
      transfer::fixed_point_triple(t.B, t.PhatR(), t.PhatL());
  Outcome out;
  double sup_e = la::op_norm(tr.support_e - t.PhatR());
  double sup_r = la::op_norm(tr.support_rho - t.PhatL());
  int violations = 0;
  double worst_margin = 1e300;
  la::Rng rng(0);
  for (int trial = 0; trial < 100; ++trial) {
    Mat A = rng.gauss_mat(3, 3);
    cd phiA = (tr.rho * A).trace();
    Mat cur = A;
    for (int N = 1; N <= 40; ++N) {
      cur = transfer::apply_T(t.B, cur);
      double lhs = la::op_norm(cur - phiA * tr.e);
      double rhs = std::pow(tr.s_prime, N + 1) * tr.resolvent_bound *
                   la::op_norm(A);
      worst_margin = std::min(worst_margin, rhs - lhs);
      if (lhs > rhs + 1e-12) ++violations;
    }
  }
  out.pass = violations == 0 && sup_e <= 1e-9 && sup_r <= 1e-9;
  out.detail = "100 seeds x N=1..40, violations=" + std::to_string(violations) +
               ", min margin=" + fmt(worst_margin) + ", support residuals " +
               fmt(sup_e) + "/" + fmt(sup_r);
  return out;
}

// --- 5: finite-window convergence rate and limit support floor --------------
Outcome criterion5() {
  edge::EdgeData ed = edge::make_edge_data(e1());
  edge::WindowReport win =
      edge::finite_chain_window(ed, 4, {6, 7, 8, 9, 10, 11, 12}, 3);
  bool dominated = !win.fit.skipped;
  for (size_t i = static_cast<size_t>(win.fit.burn_in);
       i < win.trace_distances.size(); ++i) {
    double env = win.fit.C * std::pow(win.fit.s, static_cast<double>(i));
    if (win.trace_distances[i] > env * (1.0 + 1e-9)) dominated = false;
  }
  double s2 = ed.triple.s;
  bool rate_ok = std::abs(win.fit.s - s2) <= 0.10 * s2;
  edge::WindowReport floors = edge::finite_chain_window(ed, 4, {12}, 6);
  bool floor_ok = floors.support_floor.size() == 6;
  double min_floor = 1e300;
  for (double f : floors.support_floor) {
    min_floor = std::min(min_floor, f);
    if (!(f > 1e-12)) floor_ok = false;
  }
  Outcome out;
  out.pass = dominated && rate_ok && floor_ok;
  out.detail = std::string("series dominated=") + (dominated ? "yes" : "no") +
               ", fitted s=" + fmt(win.fit.s) + " vs transfer s2=" + fmt(s2) +
               " (|ds|/s2=" + fmt(std::abs(win.fit.s - s2) / s2) +
               ", required <= 0.10; the N=6..12 series decays near s2^2 with "
               "a linear prefactor, so the 10% window around s2 is missed)" +
               ", min support floor=" + fmt(min_floor);
  return out;
}

// --- 6: spin-1 two-point decay rate against the transfer spectrum -----------
Outcome criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  edge::EdgeData ed = edge::make_edge_data(model::builtin_aklt());
  Mat Sz = Mat::Zero(3, 3);
  Sz(0, 0) = 1;
  Sz(2, 2) = -1;
  edge::CorrelationReport rep = edge::correlation_decay(ed, Sz, Sz, 12);
  double secs = seconds_since(t0);
  Outcome out;
  out.pass = !rep.fit_skipped && rep.rate_accuracy <= 0.02 && secs < 10.0;
  out.detail = "fitted s=" + fmt(rep.fit.s) + ", oracle=" +
               fmt(rep.transfer_second) + ", rel err=" +
               fmt(rep.rate_accuracy) + ", t=" + fmt(secs) + "s";
  return out;
}

// --- 7: chain-map recursions and weighted inner-product estimates -----------
Outcome criterion7() {
  model::ClassATuple t = e1();
  model::ClassATuple a = model::builtin_aklt();
  double worst = 0;
  la::Rng rng(1);
  const int l = 5;
  for (int trial = 0; trial < 100; ++trial) {
    const model::ClassATuple& m = (trial % 2 == 0) ? t : a;
    Index k = m.B[0].rows();
    int n = m.n;
    Index sub = 1;
    for (int i = 0; i < l - 1; ++i) sub *= n;
    Mat X = rng.gauss_mat(k, k);
    Vec full = gspace::gamma(m.B, l, X);
    Vec tail = Vec::Zero(full.size());
    Vec head = Vec::Zero(full.size());
    for (int nu = 0; nu < n; ++nu) {
      Vec pt = gspace::gamma(m.B, l - 1, X * m.B[nu].adjoint());
      for (Index i = 0; i < sub; ++i) tail(i * n + nu) += pt(i);
      Vec ph = gspace::gamma(m.B, l - 1, m.B[nu].adjoint() * X);
      head.segment(nu * sub, sub) += ph;
    }
    double denom = std::max(1.0, full.norm());
    worst = std::max(worst, (full - tail).norm() / denom);
    worst = std::max(worst, (full - head).norm() / denom);
  }
  bool rec_ok = worst <= 1e-12;
  transfer::SpectralTripleII tr1 =
      transfer::fixed_point_triple(t.B, t.PhatR(), t.PhatL());
  transfer::SpectralTripleII tr2 =
      transfer::fixed_point_triple(a.B, a.PhatR(), a.PhatL());
  gspace::GramReport g1 =
      gspace::gram_estimates(t.B, t.PhatR(), t.PhatL(), tr1, 8, 50);
  gspace::GramReport g2 =
      gspace::gram_estimates(a.B, a.PhatR(), a.PhatL(), tr2, 8, 50);
  Outcome o;
  o.pass = rec_ok && g1.pass && g2.pass;
  o.detail = "recursion residual max=" + fmt(worst) +
             "; inner-product estimates pass=" +
             std::string(g1.pass && g2.pass ? "yes" : "no") +
             " (worst pairing violation " +
             fmt(std::max(g1.max_pairing_violation, g2.max_pairing_violation)) +
             ", <= 0 means satisfied)";
  return o;
}

// --- 8: completely-positive block inequalities -------------------------------
Outcome criterion8() {
  model::ClassATuple t = e1();
  transfer::BasicCpReport rep =
      transfer::basiccp_bounds_check(t.B, t.PhatR(), 6, 100, 0);
  Outcome out;
  out.pass = rep.all_pass && rep.min_slack >= -1e-9;
  out.detail = "100 seeded trials at N=6, min slack=" + fmt(rep.min_slack);
  return out;
}

// --- 9: boundary states annihilate the interaction; finite pullback overlap -
Outcome criterion9() {
  edge::EdgeData ed = edge::make_edge_data(e1());
  const int m = 4, l = 6;
  Mat Fm = ham::make_h_apply(ed.t.B, m, m).Fm;
  Mat h = Mat::Identity(Fm.rows(), Fm.rows()) - Fm * Fm.adjoint();
  la::Rng rng(2);
  std::vector<Mat> sigL = {Mat::Identity(2, 2) / 2.0, la::unit(2, 0, 0)};
  std::vector<Mat> sigR = sigL;
  for (int i = 0; i < 3; ++i) {
    Mat X = ed.p * rng.gauss_mat(3, 3) * ed.q;
    sigL.push_back(edge::sigma_L_of_X(ed, X));
    sigR.push_back(edge::sigma_R_of_X(ed, X));
  }
  double worst = 0;
  for (int offset = 0; offset + m <= l; ++offset) {
    Index left = 1, right = 1;
    for (int i = 0; i < offset; ++i) left *= ed.n;
    for (int i = 0; i < l - m - offset; ++i) right *= ed.n;
    Mat A = la::kron(Mat::Identity(left, left),
                     la::kron(h, Mat::Identity(right, right)));
    for (int pad = 0; pad <= 2; ++pad) {
      for (const Mat& s : sigL)
        worst = std::max(
            worst, std::abs(edge::xi_state(ed, edge::Side::L, s, A, pad)));
      for (const Mat& s : sigR)
        worst = std::max(
            worst, std::abs(edge::xi_state(ed, edge::Side::R, s, A, pad)));
    }
  }
  bool annihilate = worst <= 1e-10;
  la::Rng rng2(3);
  int found = 0, max_N = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Mat s = rng2.psd(2);
    s /= s.trace().real();
    edge::TranslationOverlapReport ov = edge::translation_overlap(ed, s, 10);
    if (ov.found && ov.N <= 10) {
      ++found;
      max_N = std::max(max_N, ov.N);
    }
  }
  Outcome out;
  out.pass = annihilate && found == 20;
  out.detail = "max |state(interaction)| = " + fmt(worst) + "; overlaps found " +
               std::to_string(found) + "/20, max N=" + std::to_string(max_N);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> checks = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("ACCEPTANCE %zu: %s — %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
