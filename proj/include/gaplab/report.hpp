#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gaplab/edge_states.hpp"
#include "gaplab/ground_space.hpp"
#include "gaplab/hamiltonian.hpp"
#include "gaplab/model.hpp"
#include "gaplab/transfer.hpp"
#include "json.hpp"

namespace gaplab::report {

using json = nlohmann::json;

// Matrices serialize as row-major nested arrays of [re, im] pairs.
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j, const std::string& field);

// Model files carry n, n0, kR, kL, lambda, D, G, Y, B.
json model_to_json(const model::ClassATuple& t);
model::ClassATuple model_from_json(const json& j);

// Accepts a file path or "builtin:aklt" / "builtin:kappa" /
// "builtin:kappa:n0,kR,kL,kappa,n". Throws io_error-like exceptions mapped
// by the CLI; parse problems carry the offending field or byte position.
model::ClassATuple load_model(const std::string& spec);

// Stable content hash of the canonical model serialization.
std::string fingerprint(const json& model_json);

json to_json(const CheckItem& c);
json to_json(const model::TetradReport& r);
json to_json(const model::MembershipReport& r);
json to_json(const model::BulkTuple& r);
json to_json(const transfer::Condition2Report& r);
json to_json(const transfer::DecayConstants& r);
json to_json(const transfer::BasicCpReport& r);
json to_json(const gspace::IntersectionReport& r);
json to_json(const gspace::OverlapReport& r);
json to_json(const ham::SpectrumReport& r);
json to_json(const ham::GapCertificate& r);
json to_json(const edge::WindowReport& r);
json to_json(const edge::CorrelationReport& r);
json to_json(const edge::TranslationOverlapReport& r);

// Two-column CSV with the fixed header "index,value".
void write_csv(const std::string& path,
               const std::vector<std::pair<double, double>>& rows);

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gaplab::report
