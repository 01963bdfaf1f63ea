#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaplab/report.hpp"

namespace fs = std::filesystem;
using namespace gaplab;
using nlohmann::json;

namespace {

struct Options {
  std::string model = "builtin:kappa";
  int m = -1;
  int l = -1;
  int nmax = -1;
  std::uint64_t seed = 0;
  std::string out = ".";
  long long dense_vec = 1LL << 20;
  long long dense_mat = 1024;  // dense eigensolve threshold; above it the
                               // matrix-free solver takes over
};

class StageClock {
 public:
  void start(const std::string& name) {
    name_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    auto dt = std::chrono::steady_clock::now() - t0_;
    times_[name_] =
        std::chrono::duration_cast<std::chrono::microseconds>(dt).count() /
        1000.0;
  }
  const json& times() const { return times_; }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
  json times_ = json::object();
};

long long ipow(long long b, int e) {
  long long out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

json tolerance_table() {
  return json{{"tetrad_residual", 1e-10},
              {"membership_span", 1e-9},
              {"support_match", 1e-9},
              {"subspace_distance", 1e-9},
              {"kernel_zero_tol", "1e-9 * ||H||"},
              {"translation_invariance", 1e-10},
              {"frustration_free", 1e-10},
              {"overlap_positive", 1e-12},
              {"inequality_slack", -1e-9},
              {"rate_consistency", 0.05}};
}

int default_m(const model::ClassATuple& t, int l_B) {
  long long d = static_cast<long long>(t.n0) * t.n0 *
                (t.tetrad.wo.kR + 1) * (t.tetrad.wo.kL + 1);
  int m2 = 1;
  long long pw = t.n;
  while (pw < d + 1) {
    pw *= t.n;
    ++m2;
  }
  return std::max(std::max(2 * l_B, m2), 1);
}

void write_report(const Options& o, json& rep, const StageClock& clock) {
  rep["schema_version"] = "1.0";
  rep["wall_times_ms"] = clock.times();
  rep["tolerances"] = tolerance_table();
  fs::create_directories(o.out);
  const std::string path = o.out + "/report.json";
  std::ofstream f(path);
  if (!f) throw report::io_error("cannot open for writing: " + path);
  f << rep.dump(2) << "\n";
  if (!f) throw report::io_error("write failed: " + path);
}

json parameters_json(const Options& o, int m_eff, int l_eff, int nmax_eff) {
  return json{{"model", o.model},  {"m", m_eff},
              {"l", l_eff},        {"nmax", nmax_eff},
              {"seed", o.seed},    {"dense_cap_vec", o.dense_vec},
              {"dense_cap_mat", o.dense_mat}};
}

int run_validate(const Options& o) {
  StageClock clock;
  json rep;
  rep["command"] = "validate";
  model::ClassATuple t = report::load_model(o.model);
  rep["fingerprint"] = report::fingerprint(report::model_to_json(t));
  clock.start("membership");
  model::MembershipReport mem = model::validate_classa(t);
  clock.stop();
  rep["stages"]["membership"] = report::to_json(mem);
  if (!mem.member) {
    rep["parameters"] = parameters_json(o, o.m, o.l, o.nmax);
    write_report(o, rep, clock);
    std::cerr << "rejected: " << mem.failure << "\n";
    return 1;
  }
  const Mat p = t.PhatR();
  const Mat q = t.PhatL();
  clock.start("spectral_triple");
  transfer::SpectralTripleII triple = transfer::fixed_point_triple(t.B, p, q);
  clock.stop();
  rep["stages"]["spectral_triple"] =
      json{{"k", triple.k},
           {"s", triple.s},
           {"s_prime", triple.s_prime},
           {"resolvent_bound", triple.resolvent_bound},
           {"invariance_residual", triple.invariance_residual},
           {"support_e_residual", la::op_norm(triple.support_e - p)},
           {"support_rho_residual", la::op_norm(triple.support_rho - q)}};
  clock.start("condition2");
  transfer::Condition2Report c2 = transfer::check_condition2(t.B, p, q, o.seed);
  clock.stop();
  rep["stages"]["condition2"] = report::to_json(c2);
  const int m_eff = o.m > 0 ? o.m : default_m(t, mem.l_B);
  const int nmax_eff = o.nmax > 0 ? o.nmax : m_eff + 2;
  clock.start("intersection");
  gspace::IntersectionReport inter =
      gspace::intersection_property(t.B, m_eff, nmax_eff, &t, o.seed);
  clock.stop();
  rep["stages"]["intersection"] = report::to_json(inter);
  clock.start("bulk");
  model::BulkTuple bulk = model::extract_bulk_tuple(t);
  clock.stop();
  rep["stages"]["bulk"] = report::to_json(bulk);
  clock.start("decay_constants");
  // Diagnostic stage: a slow overlap profile (L beyond the sampled horizon)
  // must not overturn the membership verdict.
  try {
    transfer::DecayConstants dc = transfer::decay_constants(t.B, triple, 40);
    rep["stages"]["decay_constants"] = report::to_json(dc);
  } catch (const cap_exceeded&) {
    try {
      transfer::DecayConstants dc = transfer::decay_constants(t.B, triple, 240);
      rep["stages"]["decay_constants"] = report::to_json(dc);
    } catch (const cap_exceeded& e2) {
      rep["stages"]["decay_constants"] =
          json{{"L_found", false}, {"note", e2.what()}};
    }
  }
  clock.stop();
  clock.start("gram_estimates");
  gspace::GramReport gr = gspace::gram_estimates(
      t.B, p, q, triple, std::max(8, 2 * mem.l_B), 20, o.seed);
  clock.stop();
  rep["stages"]["gram_estimates"] =
      json{{"N", gr.N},
           {"trials", gr.trials},
           {"max_pairing_violation", gr.max_pairing_violation},
           {"max_twosided_violation", gr.max_twosided_violation},
           {"max_norm_violation", gr.max_norm_violation},
           {"pass", gr.pass}};
  clock.start("block_bounds");
  transfer::BasicCpReport bcp =
      transfer::basiccp_bounds_check(t.B, p, 4, 8, o.seed);
  clock.stop();
  rep["stages"]["block_bounds"] = report::to_json(bcp);
  rep["parameters"] = parameters_json(o, m_eff, o.l, nmax_eff);
  write_report(o, rep, clock);
  std::cout << "member: yes, l_B = " << mem.l_B
            << ", conditions pass = " << (c2.all_pass && inter.holds)
            << "\n";
  return 0;
}

int run_certify(const Options& o) {
  StageClock clock;
  json rep;
  rep["command"] = "certify";
  model::ClassATuple t = report::load_model(o.model);
  rep["fingerprint"] = report::fingerprint(report::model_to_json(t));
  clock.start("membership");
  model::MembershipReport mem = model::validate_classa(t);
  clock.stop();
  rep["stages"]["membership"] = report::to_json(mem);
  if (!mem.member) {
    rep["parameters"] = parameters_json(o, o.m, o.l, o.nmax);
    write_report(o, rep, clock);
    std::cerr << "rejected: " << mem.failure << "\n";
    return 1;
  }
  clock.start("decay_constants");
  transfer::SpectralTripleII triple =
      transfer::fixed_point_triple(t.B, t.PhatR(), t.PhatL());
  transfer::DecayConstants dc = [&] {
    try {
      return transfer::decay_constants(t.B, triple, 60);
    } catch (const cap_exceeded&) {
      return transfer::decay_constants(t.B, triple, 240);
    }
  }();
  clock.stop();
  rep["stages"]["decay_constants"] = report::to_json(dc);
  const int m_eff = o.m > 0 ? o.m : default_m(t, mem.l_B);
  std::vector<int> l_candidates;
  if (o.l > 0)
    l_candidates.push_back(o.l);
  else
    for (int l = std::max(m_eff, mem.l_B); l <= 8; ++l) l_candidates.push_back(l);
  json attempts = json::array();
  std::optional<ham::GapCertificate> cert;
  clock.start("certificate");
  for (int l : l_candidates) {
    try {
      cert = ham::gap_certificate(t.B, m_eff, l, dc, mem.l_B, o.dense_vec);
      break;
    } catch (const math_reject& e) {
      attempts.push_back(json{{"l", l}, {"error", e.what()}});
    } catch (const cap_exceeded& e) {
      attempts.push_back(json{{"l", l}, {"error", e.what()}});
      break;  // larger l only grows the required chain sizes
    }
  }
  clock.stop();
  rep["stages"]["attempts"] = attempts;
  if (!cert) {
    rep["parameters"] = parameters_json(o, m_eff, o.l, o.nmax);
    write_report(o, rep, clock);
    std::cerr << "no-certificate: every candidate window length failed\n";
    return 1;
  }
  rep["stages"]["certificate"] = report::to_json(*cert);
  const int nmax_eff = o.nmax > 0 ? o.nmax : cert->valid_from + 2;
  json table = json::array();
  bool all_sound = true;
  clock.start("exact_gap_table");
  for (int N = cert->valid_from; N <= nmax_eff; ++N) {
    if (ipow(t.n, N) > o.dense_vec) break;
    ham::SpectrumReport sp =
        ham::exact_spectrum(t.B, m_eff, N, o.dense_vec, o.dense_mat);
    bool sound = sp.gap && (*sp.gap + 1e-9 >= cert->bound);
    all_sound = all_sound && sound;
    table.push_back(json{{"N", N},
                         {"gap", sp.gap ? json(*sp.gap) : json(nullptr)},
                         {"kernel_dim", sp.kernel_dim},
                         {"method", sp.method},
                         {"bound_le_gap", sound}});
  }
  clock.stop();
  rep["stages"]["exact_gap_table"] = table;
  rep["stages"]["all_sound"] = all_sound;
  rep["parameters"] = parameters_json(o, m_eff, cert->l, nmax_eff);
  write_report(o, rep, clock);
  std::cout << "certificate: m = " << cert->m << ", l = " << cert->l
            << ", bound = " << cert->bound << " (valid from N = "
            << cert->valid_from << ")\n";
  if (!all_sound) {
    std::cerr << "certificate bound exceeded an exact gap\n";
    return 1;
  }
  return 0;
}

int run_states(const Options& o) {
  StageClock clock;
  json rep;
  rep["command"] = "states";
  model::ClassATuple t = report::load_model(o.model);
  rep["fingerprint"] = report::fingerprint(report::model_to_json(t));
  clock.start("edge_data");
  edge::EdgeData ed = edge::make_edge_data(t);
  clock.stop();
  const int m_eff = o.m > 0 ? o.m : default_m(t, ed.l_B);
  la::Rng rng(o.seed);
  fs::create_directories(o.out);

  // Boundary states: maximally mixed plus two seeded random densities, each
  // side.
  auto sample_states = [&](edge::Side side) {
    Index sd = side == edge::Side::L
                   ? static_cast<Index>(t.n0) * (t.tetrad.wo.kL + 1)
                   : static_cast<Index>(t.n0) * (t.tetrad.wo.kR + 1);
    std::vector<Mat> states;
    states.push_back(Mat(Mat::Identity(sd, sd) / double(sd)));
    for (int i = 0; i < 2; ++i) {
      Mat s = rng.psd(sd);
      states.push_back(Mat(s / s.trace()));
    }
    return states;
  };
  std::vector<Mat> states_L = sample_states(edge::Side::L);
  std::vector<Mat> states_R = sample_states(edge::Side::R);

  // Frustration-freeness: every sampled boundary state annihilates the
  // embedded window projector at several distances from the edge.
  clock.start("frustration_free");
  Mat Fm = gspace::gamma_frame(t.B, m_eff, Mat(), Mat(), false).space.frame;
  Mat h = Mat::Identity(Fm.rows(), Fm.rows()) - Fm * Fm.adjoint();
  double ff_residual = 0;
  for (int pad = 0; pad <= 2; ++pad) {
    for (const Mat& s : states_L)
      ff_residual = std::max(
          ff_residual, std::abs(edge::xi_state(ed, edge::Side::L, s, h, pad)));
    for (const Mat& s : states_R)
      ff_residual = std::max(
          ff_residual, std::abs(edge::xi_state(ed, edge::Side::R, s, h, pad)));
  }
  clock.stop();
  bool ff_pass = ff_residual <= 1e-10;
  rep["stages"]["frustration_free"] =
      json{{"m", m_eff}, {"residual", ff_residual}, {"pass", ff_pass}};

  // Bulk state: normalization, translation invariance, left/right agreement.
  clock.start("bulk_state");
  Mat A_site = rng.herm(t.n);
  A_site -= (A_site.trace() / double(t.n)) * Mat::Identity(t.n, t.n);
  cd w_norm = edge::omega_infty(ed, Mat(Mat::Identity(t.n, t.n)));
  cd wA = edge::omega_infty(ed, A_site);
  Mat In = Mat::Identity(t.n, t.n);
  cd w_left = edge::omega_infty(ed, la::kron(In, A_site));
  cd w_right = edge::omega_infty(ed, la::kron(A_site, In));
  double inv_residual =
      std::max(std::abs(wA - w_left), std::abs(wA - w_right));
  double lr_residual = std::abs(
      cd((ed.triple.e * edge::edge_map(ed, edge::Side::L, A_site)).trace()) -
      wA);
  clock.stop();
  bool omega_pass = std::abs(w_norm - 1.0) <= 1e-10 &&
                    inv_residual <= 1e-10 && lr_residual <= 1e-10;
  rep["stages"]["bulk_state"] = json{{"normalization", std::abs(w_norm - 1.0)},
                                     {"translation_residual", inv_residual},
                                     {"left_right_residual", lr_residual},
                                     {"pass", omega_pass}};

  // Finite-window convergence toward the averaged boundary window density.
  clock.start("window");
  int lw = t.n >= 3 ? 2 : 3;
  int N0 = std::max(lw, ed.l_B) + 1;
  int points = o.nmax > 0 ? o.nmax : 7;
  std::vector<int> N_list;
  for (int i = 0; i < points; ++i) N_list.push_back(N0 + i);
  edge::WindowReport win = edge::finite_chain_window(ed, m_eff, N_list, lw);
  clock.stop();
  rep["stages"]["window"] = report::to_json(win);
  std::vector<std::pair<double, double>> win_rows;
  for (size_t i = 0; i < N_list.size(); ++i)
    win_rows.emplace_back(N_list[i], win.trace_distances[i]);
  report::write_csv(o.out + "/window_distance.csv", win_rows);
  bool window_pass = win.fit.skipped || win.fit.s < 1.0;
  double floor_min = win.support_floor.empty()
                         ? 0.0
                         : *std::min_element(win.support_floor.begin(),
                                             win.support_floor.end());
  window_pass = window_pass && floor_min > 0;

  // Correlation decay of a seeded traceless observable.
  clock.start("correlation");
  int r_max = o.nmax > 0 ? o.nmax + 4 : 12;
  edge::CorrelationReport corr = edge::correlation_decay(ed, A_site, A_site, r_max);
  clock.stop();
  rep["stages"]["correlation"] = report::to_json(corr);
  std::vector<std::pair<double, double>> corr_rows;
  for (size_t i = 0; i < corr.values.size(); ++i)
    corr_rows.emplace_back(corr.r_min + static_cast<int>(i), corr.values[i]);
  report::write_csv(o.out + "/correlation.csv", corr_rows);
  bool corr_pass =
      corr.fit_skipped || corr.fit.s <= corr.transfer_second * 1.05 + 1e-9;

  // Translation overlaps of the sampled left boundary states.
  clock.start("translation_overlap");
  int ov_cap = std::max(16, o.nmax);
  json ov_json = json::array();
  bool trans_pass = true;
  std::vector<std::pair<double, double>> ov_rows;
  for (size_t i = 0; i < states_L.size(); ++i) {
    edge::TranslationOverlapReport tr =
        edge::translation_overlap(ed, states_L[i], ov_cap);
    ov_json.push_back(report::to_json(tr));
    trans_pass = trans_pass && tr.found;
    if (i == 0)
      for (size_t nn = 0; nn < tr.overlaps.size(); ++nn)
        ov_rows.emplace_back(static_cast<double>(nn), tr.overlaps[nn]);
  }
  clock.stop();
  rep["stages"]["translation_overlap"] = ov_json;
  report::write_csv(o.out + "/overlap.csv", ov_rows);

  bool all_pass =
      ff_pass && omega_pass && window_pass && corr_pass && trans_pass;
  rep["stages"]["summary"] = json{{"frustration_free", ff_pass},
                                  {"bulk_state", omega_pass},
                                  {"window", window_pass},
                                  {"correlation", corr_pass},
                                  {"translation_overlap", trans_pass},
                                  {"all_pass", all_pass}};
  rep["parameters"] = parameters_json(o, m_eff, o.l, o.nmax);
  write_report(o, rep, clock);
  std::cout << "state diagnostics: " << (all_pass ? "pass" : "FAIL") << "\n";
  return all_pass ? 0 : 1;
}

int run_export(const Options& o, const char* command) {
  StageClock clock;
  json rep;
  rep["command"] = command;
  clock.start("export");
  model::ClassATuple t = report::load_model(o.model);
  json mj = report::model_to_json(t);
  fs::create_directories(o.out);
  const std::string path = o.out + "/model.json";
  std::ofstream f(path);
  if (!f) throw report::io_error("cannot open for writing: " + path);
  f << mj.dump(2) << "\n";
  if (!f) throw report::io_error("write failed: " + path);
  clock.stop();
  rep["fingerprint"] = report::fingerprint(mj);
  rep["stages"]["model_file"] = path;
  rep["parameters"] = parameters_json(o, o.m, o.l, o.nmax);
  write_report(o, rep, clock);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("GAPLAB_DENSE_CAP")) {
    long long cap = std::atoll(env);
    if (cap > 0) {
      o.dense_vec = cap;
      o.dense_mat = std::min<long long>(1024, cap);
    }
  }
  CLI::App app{"Structured matrix-product models: validation, spectral-gap "
               "certificates, and edge-state diagnostics"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model,
                    "model file path or builtin:aklt / builtin:kappa "
                    "/ builtin:kappa:n0,kR,kL,kappa,n");
    sub->add_option("--m", o.m, "interaction length (default: derived)");
    sub->add_option("--l", o.l, "certificate window length (default: search)");
    sub->add_option("--nmax", o.nmax, "size cap for series and tables");
    sub->add_option("--seed", o.seed, "seed for sampled suites");
    sub->add_option("--out", o.out, "output directory");
  };
  CLI::App* validate = app.add_subcommand("validate", "membership and structural conditions");
  CLI::App* certify = app.add_subcommand("certify", "spectral-gap certificate");
  CLI::App* states = app.add_subcommand("states", "edge and bulk state diagnostics");
  CLI::App* example = app.add_subcommand("example", "write a builtin model file");
  CLI::App* exportc = app.add_subcommand("export", "canonicalize a model file");
  for (CLI::App* sub : {validate, certify, states, example, exportc})
    add_common(sub);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (validate->parsed()) return run_validate(o);
    if (certify->parsed()) return run_certify(o);
    if (states->parsed()) return run_states(o);
    if (example->parsed()) return run_export(o, "example");
    if (exportc->parsed()) return run_export(o, "export");
    std::cerr << "no command given\n";
    return 2;
  } catch (const dimension_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const report::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const math_reject& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 1;
  } catch (const cap_exceeded& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
