#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lognls/config.hpp"

using namespace lognls;

namespace {

std::string write_cfg(const std::string& name, const std::string& body) {
  const std::string path = name;
  std::ofstream f(path, std::ios::trunc);
  f << body;
  return path;
}

const char* kGaussianCfg = R"({
  "scenario": "gaussian",
  "output_dir": "cfg_test_gaussian",
  "potential": {"kind": "harmonic", "omega": [1.0]},
  "lambda": -1.0,
  "packets": [{"q0": [0.0], "p0": [0.0], "a0": [2.0], "b0": 0.8}],
  "T": 1.0,
  "flow_dt": 1e-3,
  "diagnostics": {"tau_analytics": true, "moment_growth": true}
})";

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("well-formed config parses with defaults applied") {
  const std::string p = write_cfg("cfg_ok.json", kGaussianCfg);
  RunConfig cfg = load_config(p);
  CHECK(cfg.scenario == Scenario::Gaussian);
  CHECK(cfg.lambda == -1.0);
  CHECK(cfg.alpha == 1.0);  // default
  CHECK(cfg.packets.size() == 1);
  CHECK(cfg.packets[0].a0[0] == cdouble(2.0, 0.0));
  CHECK(cfg.packets[0].b0 == cdouble(0.8, 0.0));
  CHECK(cfg.diagnostics.tau_analytics);
  std::filesystem::remove(p);
}

TEST_CASE("unknown keys are schema errors") {
  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["typo_key"] = 1;
  const std::string p = write_cfg("cfg_unknown.json", j.dump());
  CHECK_THROWS_AS(load_config(p), ConfigError);
  std::filesystem::remove(p);

  nlohmann::json j2 = nlohmann::json::parse(kGaussianCfg);
  j2["packets"][0]["width"] = 2.0;
  const std::string p2 = write_cfg("cfg_unknown2.json", j2.dump());
  CHECK_THROWS_AS(load_config(p2), ConfigError);
  std::filesystem::remove(p2);
}

TEST_CASE("missing file, broken JSON and wrong types are schema errors") {
  CHECK_THROWS_AS(load_config("no_such_file.json"), ConfigError);
  const std::string p = write_cfg("cfg_broken.json", "{ not json");
  CHECK_THROWS_AS(load_config(p), ConfigError);
  std::filesystem::remove(p);

  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["T"] = "one";
  const std::string p2 = write_cfg("cfg_badtype.json", j.dump());
  CHECK_THROWS_AS(load_config(p2), ConfigError);
  std::filesystem::remove(p2);
}

TEST_CASE("scenario shape rules are enforced") {
  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["packets"].push_back(j["packets"][0]);
  const std::string p = write_cfg("cfg_twopk.json", j.dump());
  CHECK_THROWS_AS(load_config(p), ConfigError);  // gaussian takes one packet
  std::filesystem::remove(p);

  nlohmann::json j2 = nlohmann::json::parse(kGaussianCfg);
  j2["scenario"] = "single";
  j2["grid"] = {{"lo", {-12.0}}, {"hi", {12.0}}, {"n", {128}}};
  j2["diagnostics"] = nlohmann::json::object();
  const std::string p2 = write_cfg("cfg_noeps.json", j2.dump());
  CHECK_THROWS_AS(load_config(p2), ConfigError);  // single requires eps
  std::filesystem::remove(p2);
}

TEST_CASE("diagnostics availability depends on the scenario") {
  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["diagnostics"]["gauge_check"] = true;
  const std::string p = write_cfg("cfg_diag.json", j.dump());
  CHECK_THROWS_AS(load_config(p), ConfigError);
  std::filesystem::remove(p);

  nlohmann::json j2 = nlohmann::json::parse(kGaussianCfg);
  j2["diagnostics"] = {{"interaction", true}};  // two-packet diagnostic, superpose only
  const std::string p2 = write_cfg("cfg_diag2.json", j2.dump());
  CHECK_THROWS_AS(load_config(p2), ConfigError);
  std::filesystem::remove(p2);
}

TEST_CASE("physical constraints are separated from schema errors") {
  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["alpha"] = 0.5;
  const std::string p = write_cfg("cfg_alpha.json", j.dump());
  CHECK_THROWS_AS(load_config(p), ConstraintError);
  std::filesystem::remove(p);

  nlohmann::json j2 = nlohmann::json::parse(kGaussianCfg);
  j2["packets"][0]["a0"] = {-1.0};
  const std::string p2 = write_cfg("cfg_a0.json", j2.dump());
  CHECK_THROWS_AS(load_config(p2), ConstraintError);
  std::filesystem::remove(p2);

  nlohmann::json j3 = nlohmann::json::parse(kGaussianCfg);
  j3["potential"] = {{"kind", "harmonic"}, {"omega", {1.0, 1.0}}};
  const std::string p3 = write_cfg("cfg_dim.json", j3.dump());
  CHECK_THROWS_AS(load_config(p3), ConstraintError);
  std::filesystem::remove(p3);
}

TEST_CASE("complex packet entries accept [re, im] pairs") {
  nlohmann::json j = nlohmann::json::parse(kGaussianCfg);
  j["packets"][0]["a0"] = {{1.0, 0.5}};
  j["packets"][0]["b0"] = {0.0, 1.0};
  const std::string p = write_cfg("cfg_cplx.json", j.dump());
  RunConfig cfg = load_config(p);
  CHECK(cfg.packets[0].a0[0] == cdouble(1.0, 0.5));
  CHECK(cfg.packets[0].b0 == cdouble(0.0, 1.0));
  std::filesystem::remove(p);
}

TEST_CASE("output dir resolution honors LOGNLS_OUTPUT_ROOT") {
  unsetenv("LOGNLS_OUTPUT_ROOT");
  CHECK(resolve_output_dir("/abs/path") == "/abs/path");
  CHECK(resolve_output_dir("rel") == "rel");
  setenv("LOGNLS_OUTPUT_ROOT", "/tmp/lognls_root", 1);
  CHECK(resolve_output_dir("rel") == "/tmp/lognls_root/rel");
  CHECK(resolve_output_dir("/abs/path") == "/abs/path");
  unsetenv("LOGNLS_OUTPUT_ROOT");
}

TEST_CASE("scenario catalogue lists all six runners") {
  std::vector<std::string> lines = list_scenarios();
  CHECK(lines.size() == 6);
  bool has_sweep = false;
  for (const std::string& l : lines) has_sweep |= l.find("sweep") != std::string::npos;
  CHECK(has_sweep);
}

TEST_CASE("classical runner output is byte-reproducible") {
  namespace fs = std::filesystem;
  const char* body = R"({
    "scenario": "classical",
    "output_dir": "cfg_test_classical",
    "potential": {"kind": "harmonic_cosine", "omega": [1.0], "coeff": [0.5]},
    "packets": [{"q0": [1.0], "p0": [0.3]}],
    "T": 0.5,
    "flow_dt": 1e-3
  })";
  const std::string p = write_cfg("cfg_classical.json", body);
  RunConfig cfg = load_config(p);
  fs::remove_all("cfg_test_classical");
  run_config(cfg);
  const std::string first = slurp("cfg_test_classical/trajectory_0.csv");
  const std::string summary1 = slurp("cfg_test_classical/summary.json");
  fs::remove_all("cfg_test_classical");
  run_config(cfg);
  CHECK(slurp("cfg_test_classical/trajectory_0.csv") == first);
  CHECK(slurp("cfg_test_classical/summary.json") == summary1);
  CHECK(nlohmann::json::parse(summary1)["all_checks_pass"] == true);
  fs::remove_all("cfg_test_classical");
  fs::remove(p);
}

TEST_CASE("gaussian runner writes closure analytics that pass") {
  namespace fs = std::filesystem;
  const std::string p = write_cfg("cfg_gauss_run.json", kGaussianCfg);
  RunConfig cfg = load_config(p);
  fs::remove_all("cfg_test_gaussian");
  run_config(cfg);
  nlohmann::json j = nlohmann::json::parse(slurp("cfg_test_gaussian/summary.json"));
  CHECK(j["all_checks_pass"] == true);
  bool saw_residual = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "width_flow_residual") {
      saw_residual = true;
      CHECK(c["value"].get<double>() < 1e-6);
    }
  CHECK(saw_residual);
  CHECK(fs::exists("cfg_test_gaussian/closure.csv"));
  fs::remove_all("cfg_test_gaussian");
  fs::remove(p);
}

TEST_SUITE_END();
