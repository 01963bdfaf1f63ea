#include "gaplab/report.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gaplab::report {

namespace {

json fit_to_json(const la::DecayFit& f) {
  return json{{"C", f.C},
              {"s", f.s},
              {"log_residual", f.log_residual},
              {"skipped", f.skipped},
              {"burn_in", f.burn_in}};
}

json complex_to_json(const cd& z) { return json::array({z.real(), z.imag()}); }

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

cd complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw dimension_error("model: field '" + field +
                          "' entries must be [re, im] pairs");
  return cd(j[0].get<double>(), j[1].get<double>());
}

Vec vec_from_json(const json& j, const std::string& field) {
  if (!j.is_array())
    throw dimension_error("model: field '" + field + "' must be an array");
  Vec v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = complex_from_json(j[i], field);
  return v;
}

int int_field(const json& j, const std::string& field) {
  if (!j.contains(field))
    throw dimension_error("model: missing field '" + field + "'");
  if (!j[field].is_number_integer())
    throw dimension_error("model: field '" + field + "' must be an integer");
  return j[field].get<int>();
}

const json& require(const json& j, const std::string& field) {
  if (!j.contains(field))
    throw dimension_error("model: missing field '" + field + "'");
  return j[field];
}

std::vector<Mat> mat_list_from_json(const json& j, const std::string& field) {
  if (!j.is_array())
    throw dimension_error("model: field '" + field +
                          "' must be an array of matrices");
  std::vector<Mat> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(mat_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw dimension_error("model: field '" + field +
                          "' must be a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0)
    throw dimension_error("model: field '" + field + "' has an empty row");
  Mat m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw dimension_error("model: field '" + field + "' row " +
                            std::to_string(r) + " has inconsistent length");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(
          j[r][c], field + "(" + std::to_string(r) + "," + std::to_string(c) + ")");
  }
  return m;
}

json model_to_json(const model::ClassATuple& t) {
  json j;
  j["n"] = t.n;
  j["n0"] = t.n0;
  j["kR"] = t.tetrad.wo.kR;
  j["kL"] = t.tetrad.wo.kL;
  j["lambda"] = vec_to_json(t.tetrad.wo.lambda);
  json D = json::array();
  for (const Mat& m : t.tetrad.bd.D) D.push_back(mat_to_json(m));
  j["D"] = std::move(D);
  json G = json::array();
  for (const Mat& m : t.tetrad.bd.G) G.push_back(mat_to_json(m));
  j["G"] = std::move(G);
  j["Y"] = mat_to_json(t.tetrad.Y);
  json B = json::array();
  for (const Mat& m : t.B) B.push_back(mat_to_json(m));
  j["B"] = std::move(B);
  return j;
}

model::ClassATuple model_from_json(const json& j) {
  if (!j.is_object()) throw dimension_error("model: top level must be an object");
  model::ClassATuple t;
  t.n = int_field(j, "n");
  t.n0 = int_field(j, "n0");
  t.tetrad.wo.kR = int_field(j, "kR");
  t.tetrad.wo.kL = int_field(j, "kL");
  if (t.n < 1 || t.n0 < 1 || t.tetrad.wo.kR < 0 || t.tetrad.wo.kL < 0)
    throw dimension_error("model: n, n0 must be >= 1 and kR, kL >= 0");
  t.tetrad.wo.lambda = vec_from_json(require(j, "lambda"), "lambda");
  if (t.tetrad.wo.lambda.size() != t.tetrad.wo.dim())
    throw dimension_error("model: field 'lambda' must have kR + kL + 1 entries");
  t.tetrad.bd.D = mat_list_from_json(require(j, "D"), "D");
  t.tetrad.bd.G = mat_list_from_json(require(j, "G"), "G");
  t.tetrad.Y = mat_from_json(require(j, "Y"), "Y");
  t.B.clear();
  const json& B = require(j, "B");
  if (!B.is_array() || B.size() != static_cast<size_t>(t.n))
    throw dimension_error("model: field 'B' must hold exactly n matrices");
  for (size_t i = 0; i < B.size(); ++i)
    t.B.push_back(mat_from_json(B[i], "B[" + std::to_string(i) + "]"));
  return t;
}

model::ClassATuple load_model(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    std::string rest = spec.substr(8);
    if (rest == "aklt") return model::builtin_aklt();
    if (rest == "kappa") return model::build_kappa_example(1, 1, 1, 0.5, 2);
    if (rest.rfind("kappa:", 0) == 0) {
      std::string args = rest.substr(6);
      std::vector<std::string> parts;
      std::stringstream ss(args);
      std::string item;
      while (std::getline(ss, item, ',')) parts.push_back(item);
      if (parts.size() != 5)
        throw dimension_error(
            "builtin:kappa takes five arguments n0,kR,kL,kappa,n");
      try {
        return model::build_kappa_example(std::stoi(parts[0]),
                                          std::stoi(parts[1]),
                                          std::stoi(parts[2]),
                                          std::stod(parts[3]),
                                          std::stoi(parts[4]));
      } catch (const std::invalid_argument&) {
        throw dimension_error("builtin:kappa arguments must be numeric");
      } catch (const std::out_of_range&) {
        throw dimension_error("builtin:kappa arguments out of range");
      }
    }
    throw dimension_error("unknown builtin model '" + spec + "'");
  }
  std::ifstream in(spec);
  if (!in) throw io_error("cannot read model file: " + spec);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw dimension_error("model file '" + spec + "': " + e.what());
  }
  return model_from_json(j);
}

std::string fingerprint(const json& model_json) {
  const std::string dump = model_json.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

json to_json(const CheckItem& c) {
  return json{{"name", c.name},
              {"residual", c.residual},
              {"pass", c.pass},
              {"note", c.note}};
}

json to_json(const model::TetradReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return json{{"accepted", r.accepted},
              {"L_check", r.L_check},
              {"checks", std::move(checks)},
              {"failure", r.failure}};
}

json to_json(const model::MembershipReport& r) {
  return json{{"member", r.member},
              {"tetrad", to_json(r.tetrad)},
              {"span_residuals", r.span_residuals},
              {"l_B", r.l_B},
              {"transfer_radius", r.transfer_radius},
              {"failure", r.failure}};
}

json to_json(const model::BulkTuple& r) {
  json omega = json::array();
  for (const Mat& m : r.omega) omega.push_back(mat_to_json(m));
  return json{{"omega", std::move(omega)},
              {"primitive", r.primitive},
              {"l_omega", r.l_omega},
              {"radius", r.radius}};
}

json to_json(const transfer::Condition2Report& r) {
  json items = json::array();
  for (const auto& c : r.items) items.push_back(to_json(c));
  return json{{"all_pass", r.all_pass}, {"items", std::move(items)}};
}

json to_json(const transfer::DecayConstants& r) {
  return json{{"a", r.a},
              {"c", r.c},
              {"E", r.E},
              {"Etilde", r.Etilde},
              {"F", r.F},
              {"L", r.L},
              {"N_max", r.N_max},
              {"C_contour", r.C_contour},
              {"s_prime", r.s_prime},
              {"E_fit", fit_to_json(r.E_fit)}};
}

json to_json(const transfer::BasicCpReport& r) {
  json items = json::array();
  for (const auto& c : r.items) items.push_back(to_json(c));
  return json{{"N", r.N},
              {"trials", r.trials},
              {"items", std::move(items)},
              {"min_slack", r.min_slack},
              {"all_pass", r.all_pass}};
}

json to_json(const gspace::IntersectionReport& r) {
  return json{{"m", r.m},
              {"N_max", r.N_max},
              {"N_checked", r.N_checked},
              {"distances", r.distances},
              {"holds", r.holds},
              {"recursion_residual", r.recursion_residual},
              {"classa_checked", r.classa_checked},
              {"classa_inclusion_residual", r.classa_inclusion_residual},
              {"empirical_m", r.empirical_m}};
}

json to_json(const gspace::OverlapReport& r) {
  json j{{"l", r.l}, {"N", r.N}, {"analytic_valid", r.analytic_valid}};
  j["numeric"] = r.numeric ? json(*r.numeric) : json(nullptr);
  j["analytic"] = r.analytic ? json(*r.analytic) : json(nullptr);
  if (r.numeric || r.analytic) j["value"] = r.value();
  return j;
}

json to_json(const ham::SpectrumReport& r) {
  json j{{"m", r.m},
         {"N", r.N},
         {"dim", r.dim},
         {"ground_energy", r.ground_energy},
         {"kernel_dim", r.kernel_dim},
         {"kernel_gamma_distance", r.kernel_gamma_distance},
         {"kernel_matches_gamma", r.kernel_matches_gamma},
         {"kernel_residual", r.kernel_residual},
         {"method", r.method},
         {"zero_tol", r.zero_tol}};
  j["gap"] = r.gap ? json(*r.gap) : json(nullptr);
  return j;
}

json to_json(const ham::GapCertificate& r) {
  json j{{"m", r.m},
         {"l", r.l},
         {"gamma_lm", r.gamma_lm},
         {"epsilon", r.epsilon},
         {"epsilon_source", r.epsilon_source},
         {"bound", r.bound},
         {"valid_from", r.valid_from}};
  j["eps_numeric"] = r.eps_numeric ? json(*r.eps_numeric) : json(nullptr);
  j["eps_analytic"] = r.eps_analytic ? json(*r.eps_analytic) : json(nullptr);
  return j;
}

json to_json(const edge::WindowReport& r) {
  return json{{"l", r.l},
              {"N_list", r.N_list},
              {"trace_distances", r.trace_distances},
              {"limit", mat_to_json(r.limit)},
              {"fit", fit_to_json(r.fit)},
              {"support_floor", r.support_floor}};
}

json to_json(const edge::CorrelationReport& r) {
  return json{{"r_min", r.r_min},
              {"values", r.values},
              {"fit", fit_to_json(r.fit)},
              {"fit_skipped", r.fit_skipped},
              {"transfer_second", r.transfer_second},
              {"rate_accuracy", r.rate_accuracy}};
}

json to_json(const edge::TranslationOverlapReport& r) {
  json j{{"found", r.found}, {"overlaps", r.overlaps}};
  j["N"] = r.found ? json(r.N) : json(nullptr);
  return j;
}

void write_csv(const std::string& path,
               const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "index,value\n";
  out << std::setprecision(17);
  for (const auto& [idx, val] : rows) out << idx << "," << val << "\n";
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace gaplab::report
