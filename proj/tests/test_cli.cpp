#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(GAPLAB_CLI_PATH) + " " + args +
                    " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::path(GAPLAB_TMP_DIR) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  return json::parse(f);
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

const char* kProductModel = R"({
  "n": 2, "n0": 1, "kR": 0, "kL": 0,
  "lambda": [[1, 0]],
  "D": [], "G": [],
  "Y": [[[0, 0]]],
  "B": [[[[1, 0]]], [[[0, 0]]]]
})";

}  // namespace

TEST_CASE("validate accepts every builtin instance") {
  struct Case {
    const char* model;
    int l_B;
  };
  for (Case c : {Case{"builtin:kappa", 2}, Case{"builtin:kappa:2,1,0,0.5,2", 3},
                 Case{"builtin:kappa:1,0,2,0.5,2", 2}, Case{"builtin:aklt", 2}}) {
    fs::path d = fresh_dir(std::string("validate_") + std::to_string(c.l_B) +
                           "_" + std::to_string(std::string(c.model).size()));
    REQUIRE(run_cli(std::string("validate --model ") + c.model + " --out " +
                    d.string()) == 0);
    json rep = read_json(d / "report.json");
    CHECK(rep["stages"]["membership"]["member"].get<bool>());
    CHECK(rep["stages"]["membership"]["l_B"].get<int>() == c.l_B);
    CHECK(rep.contains("fingerprint"));
    CHECK(rep.contains("tolerances"));
  }
}

TEST_CASE("validate rejects a tampered weight vector with exit code 1") {
  fs::path d = fresh_dir("tamper");
  REQUIRE(run_cli("export --model builtin:kappa --out " + d.string()) == 0);
  json m = read_json(d / "model.json");
  for (auto& entry : m["lambda"]) entry[0] = entry[0].get<double>() * 0.9;
  std::ofstream(d / "tampered.json") << m.dump();
  CHECK(run_cli("validate --model " + (d / "tampered.json").string() +
                " --out " + d.string()) == 1);
  json rep = read_json(d / "report.json");
  CHECK(!rep["stages"]["membership"]["member"].get<bool>());
  CHECK(rep["stages"]["membership"]["failure"].get<std::string>().find(
            "lambda") != std::string::npos);
}

TEST_CASE("malformed input and missing files map to distinct exit codes") {
  fs::path d = fresh_dir("badinput");
  std::ofstream(d / "broken.json") << "{nope";
  CHECK(run_cli("validate --model " + (d / "broken.json").string() + " --out " +
                d.string()) == 2);
  CHECK(run_cli("validate --model " + (d / "does_not_exist.json").string() +
                " --out " + d.string()) == 3);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("validate --no-such-flag") == 2);
}

TEST_CASE("certify produces a sound positive bound") {
  fs::path d = fresh_dir("certify_aklt");
  REQUIRE(run_cli("certify --model builtin:aklt --m 2 --out " + d.string()) ==
          0);
  json rep = read_json(d / "report.json");
  double bound = rep["stages"]["certificate"]["bound"].get<double>();
  CHECK(bound > 0);
  for (const auto& row : rep["stages"]["exact_gap_table"])
    CHECK(row["bound_le_gap"].get<bool>());
}

TEST_CASE("certify handles a file-based product model exactly") {
  fs::path d = fresh_dir("certify_product");
  std::ofstream(d / "product.json") << kProductModel;
  REQUIRE(run_cli("certify --model " + (d / "product.json").string() +
                  " --m 1 --l 2 --out " + d.string()) == 0);
  json rep = read_json(d / "report.json");
  CHECK(rep["stages"]["certificate"]["bound"].get<double>() ==
        doctest::Approx(0.25).epsilon(1e-9));
  CHECK(rep["stages"]["certificate"]["epsilon"].get<double>() <= 1e-12);
}

TEST_CASE("states writes the diagnostic series files") {
  fs::path d = fresh_dir("states");
  REQUIRE(run_cli("states --model builtin:kappa --nmax 8 --out " + d.string()) ==
          0);
  REQUIRE(fs::exists(d / "report.json"));
  for (const char* name :
       {"window_distance.csv", "correlation.csv", "overlap.csv"}) {
    REQUIRE(fs::exists(d / name));
    CHECK(first_line(d / name) == "index,value");
  }
  json rep = read_json(d / "report.json");
  CHECK(rep["stages"].contains("frustration_free"));
  CHECK(rep["stages"].contains("bulk_state"));
}

TEST_CASE("reports are deterministic apart from wall times") {
  fs::path d1 = fresh_dir("det1");
  fs::path d2 = fresh_dir("det2");
  REQUIRE(run_cli("validate --model builtin:kappa --out " + d1.string()) == 0);
  REQUIRE(run_cli("validate --model builtin:kappa --out " + d2.string()) == 0);
  json a = read_json(d1 / "report.json");
  json b = read_json(d2 / "report.json");
  a.erase("wall_times_ms");
  b.erase("wall_times_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("export round-trips through validation") {
  fs::path d = fresh_dir("roundtrip");
  REQUIRE(run_cli("export --model builtin:aklt --out " + d.string()) == 0);
  REQUIRE(fs::exists(d / "model.json"));
  CHECK(run_cli("validate --model " + (d / "model.json").string() + " --out " +
                d.string()) == 0);
  fs::path d2 = fresh_dir("example");
  REQUIRE(run_cli("example --out " + d2.string()) == 0);
  CHECK(fs::exists(d2 / "model.json"));
}
