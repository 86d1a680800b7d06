#include "lognls/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lognls {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) bad("unknown key '" + it.key() + "' in " + where);
  }
}

const json& need(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    bad(std::string(where) + " requires key '" + key + "'");
  return j.at(key);
}

double num(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

bool boolean(const json& j, const std::string& what) {
  if (!j.is_boolean()) bad(what + " must be a boolean");
  return j.get<bool>();
}

std::string str(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

// scalar shorthand: 3.0 parses as [3.0]
std::vector<double> num_list(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.empty()) bad(what + " must be a number or a non-empty array of numbers");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(num(e, what + " entry"));
  return v;
}

// complex values: 2.0 or [re, im]
cdouble cnum(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad(what + " must be a number or an [re, im] pair");
}

std::vector<cdouble> cnum_list(const json& j, const std::string& what) {
  if (j.is_number()) return {cnum(j, what)};
  if (!j.is_array() || j.empty()) bad(what + " must be a complex value or a non-empty array");
  // an [re, im] pair is one complex value, not a list of two reals
  if (j.size() == 2 && j[0].is_number() && j[1].is_number()) return {cnum(j, what)};
  std::vector<cdouble> v;
  for (const auto& e : j) v.push_back(cnum(e, what + " entry"));
  return v;
}

Potential parse_potential(const json& j) {
  if (!j.is_object()) bad("'potential' must be an object");
  check_keys(j, {"kind", "omega", "coeff", "dim"}, "potential");
  const std::string kind = str(need(j, "kind", "potential"), "potential.kind");
  if (kind == "zero") {
    const double d = num(need(j, "dim", "potential kind 'zero'"), "potential.dim");
    if (d < 1 || d != static_cast<std::size_t>(d)) bad("potential.dim must be a positive integer");
    return Potential::zero(static_cast<std::size_t>(d));
  }
  if (kind == "harmonic")
    return Potential::harmonic(num_list(need(j, "omega", "potential kind 'harmonic'"),
                                        "potential.omega"));
  if (kind == "inverted_harmonic") {
    const double w = num(need(j, "omega", "potential kind 'inverted_harmonic'"),
                         "potential.omega");
    const double d = num(need(j, "dim", "potential kind 'inverted_harmonic'"), "potential.dim");
    if (d < 1 || d != static_cast<std::size_t>(d)) bad("potential.dim must be a positive integer");
    return Potential::inverted_harmonic(w, static_cast<std::size_t>(d));
  }
  if (kind == "cosine")
    return Potential::cosine(num_list(need(j, "coeff", "potential kind 'cosine'"),
                                      "potential.coeff"));
  if (kind == "harmonic_cosine")
    return Potential::harmonic_cosine(
        num_list(need(j, "omega", "potential kind 'harmonic_cosine'"), "potential.omega"),
        num_list(need(j, "coeff", "potential kind 'harmonic_cosine'"), "potential.coeff"));
  bad("unknown potential kind '" + kind + "'");
}

PacketSpec parse_packet(const json& j, std::size_t idx) {
  const std::string where = "packets[" + std::to_string(idx) + "]";
  if (!j.is_object()) bad(where + " must be an object");
  check_keys(j, {"a0", "b0", "q0", "p0"}, where.c_str());
  PacketSpec pk;
  pk.q0 = num_list(need(j, "q0", where.c_str()), where + ".q0");
  pk.a0 = j.contains("a0") ? cnum_list(j.at("a0"), where + ".a0")
                           : std::vector<cdouble>(pk.q0.size(), cdouble(1.0, 0.0));
  pk.p0 = j.contains("p0") ? num_list(j.at("p0"), where + ".p0")
                           : std::vector<double>(pk.q0.size(), 0.0);
  pk.b0 = j.contains("b0") ? cnum(j.at("b0"), where + ".b0") : cdouble(1.0, 0.0);
  if (pk.a0.size() != pk.q0.size() || pk.p0.size() != pk.q0.size())
    bad(where + ": a0, q0, p0 must share one length");
  return pk;
}

Grid parse_grid(const json& j) {
  if (!j.is_object()) bad("'grid' must be an object");
  check_keys(j, {"lo", "hi", "n"}, "grid");
  const std::vector<double> lo = num_list(need(j, "lo", "grid"), "grid.lo");
  const std::vector<double> hi = num_list(need(j, "hi", "grid"), "grid.hi");
  const std::vector<double> n = num_list(need(j, "n", "grid"), "grid.n");
  if (lo.size() != hi.size() || n.size() != lo.size())
    bad("grid.lo, grid.hi, grid.n must share one length");
  std::vector<AxisSpec> axes;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (n[k] < 1 || n[k] != static_cast<std::size_t>(n[k]))
      bad("grid.n entries must be positive integers");
    axes.push_back(AxisSpec{lo[k], hi[k], static_cast<std::size_t>(n[k])});
  }
  return Grid::make(std::move(axes));  // ConstraintError on physical violations
}

Scenario parse_scenario(const std::string& s) {
  if (s == "classical") return Scenario::Classical;
  if (s == "gaussian") return Scenario::Gaussian;
  if (s == "single") return Scenario::Single;
  if (s == "superpose") return Scenario::Superpose;
  if (s == "sweep") return Scenario::Sweep;
  if (s == "crossing") return Scenario::Crossing;
  bad("unknown scenario '" + s + "'");
}

SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "linear") return SweepKind::Linear;
  if (s == "subcritical") return SweepKind::Subcritical;
  if (s == "critical") return SweepKind::Critical;
  if (s == "superpose") return SweepKind::Superpose;
  bad("unknown sweep_kind '" + s + "'");
}

DiagnosticsSpec parse_diagnostics(const json& j) {
  if (!j.is_object()) bad("'diagnostics' must be an object");
  check_keys(j,
             {"gauge_check", "tensor_check", "strang_order", "loglip_pairs", "moment_growth",
              "tau_analytics", "interaction"},
             "diagnostics");
  DiagnosticsSpec d;
  if (j.contains("gauge_check")) d.gauge_check = boolean(j.at("gauge_check"), "gauge_check");
  if (j.contains("tensor_check")) d.tensor_check = boolean(j.at("tensor_check"), "tensor_check");
  if (j.contains("strang_order")) d.strang_order = boolean(j.at("strang_order"), "strang_order");
  if (j.contains("moment_growth"))
    d.moment_growth = boolean(j.at("moment_growth"), "moment_growth");
  if (j.contains("tau_analytics"))
    d.tau_analytics = boolean(j.at("tau_analytics"), "tau_analytics");
  if (j.contains("interaction")) d.interaction = boolean(j.at("interaction"), "interaction");
  if (j.contains("loglip_pairs")) {
    const double n = num(j.at("loglip_pairs"), "loglip_pairs");
    if (n < 0 || n != static_cast<std::size_t>(n)) bad("loglip_pairs must be a non-negative integer");
    d.loglip_pairs = static_cast<std::size_t>(n);
  }
  return d;
}

// physical-range checks (exit 3), applied after the schema passes
void constrain(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw ConstraintError("config: " + m); };
  if (!(cfg.T > 0.0)) fail("T must be positive");
  if (!(cfg.dt > 0.0) || !(cfg.flow_dt > 0.0)) fail("dt and flow_dt must be positive");
  if (cfg.alpha < 1.0) fail("alpha must be >= 1");
  if (!(cfg.lab_dt_factor > 0.0)) fail("lab_dt_factor must be positive");
  if (cfg.delta && *cfg.delta < 0.0) fail("delta must be >= 0");
  if (!(cfg.gamma > 0.0) || cfg.gamma >= 1.0) fail("gamma must lie in (0, 1)");

  const bool needs_eps = cfg.scenario == Scenario::Single || cfg.scenario == Scenario::Superpose;
  if (needs_eps && (!(cfg.eps > 0.0) || cfg.eps > 1.0)) fail("eps must lie in (0, 1]");
  for (double e : cfg.eps_list)
    if (!(e > 0.0) || e > 1.0) fail("eps_list entries must lie in (0, 1]");

  const std::size_t d = cfg.V.dim();
  for (const PacketSpec& pk : cfg.packets) {
    if (pk.q0.size() != d) fail("packet dimension differs from the potential dimension");
    for (const cdouble& a : pk.a0)
      if (!(a.real() > 0.0)) fail("packet a0 entries need a positive real part");
    if (pk.b0 == cdouble(0.0, 0.0)) fail("packet b0 must be nonzero");
  }

  const bool frame_grid =  // grid carries the moving-frame y-box for these
      cfg.scenario == Scenario::Single ||
      (cfg.scenario == Scenario::Sweep && cfg.sweep_kind != SweepKind::Superpose);
  if (frame_grid) {
    if (!cfg.grid) fail("this scenario requires a grid");
    if (cfg.grid->dim() != d) fail("grid dimension differs from the potential dimension");
  }
  if ((cfg.scenario == Scenario::Superpose ||
       (cfg.scenario == Scenario::Sweep && cfg.sweep_kind == SweepKind::Superpose)) &&
      d != 1)
    fail("superposition runs are 1-d");

  double prev = -1.0;
  for (double t : cfg.output_times) {
    if (!(t >= 0.0) || t > cfg.T * (1.0 + 1e-9)) fail("output_times must lie in [0, T]");
    if (t <= prev) fail("output_times must increase strictly");
    prev = t;
  }
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Classical: return "classical";
    case Scenario::Gaussian: return "gaussian";
    case Scenario::Single: return "single";
    case Scenario::Superpose: return "superpose";
    case Scenario::Sweep: return "sweep";
    case Scenario::Crossing: return "crossing";
  }
  return "unknown";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  check_keys(j,
             {"scenario", "output_dir", "potential", "lambda", "alpha", "eps", "eps_list",
              "gamma", "packets", "T", "dt", "flow_dt", "grid", "output_times", "delta",
              "sweep_kind", "lab_dt_factor", "snapshots", "diagnostics"},
             "the top level");

  RunConfig cfg;
  cfg.scenario = parse_scenario(str(need(j, "scenario", "the top level"), "scenario"));
  cfg.V = parse_potential(need(j, "potential", "the top level"));

  const json& jp = need(j, "packets", "the top level");
  if (!jp.is_array() || jp.empty()) bad("'packets' must be a non-empty array");
  for (std::size_t k = 0; k < jp.size(); ++k) cfg.packets.push_back(parse_packet(jp[k], k));

  if (j.contains("output_dir")) cfg.output_dir = str(j.at("output_dir"), "output_dir");
  if (j.contains("lambda")) cfg.lambda = num(j.at("lambda"), "lambda");
  if (j.contains("alpha")) cfg.alpha = num(j.at("alpha"), "alpha");
  if (j.contains("eps")) cfg.eps = num(j.at("eps"), "eps");
  if (j.contains("eps_list")) {
    cfg.eps_list = num_list(j.at("eps_list"), "eps_list");
    if (cfg.eps_list.size() < 2) bad("eps_list needs at least 2 entries");
  }
  if (j.contains("gamma")) cfg.gamma = num(j.at("gamma"), "gamma");
  if (j.contains("T")) cfg.T = num(j.at("T"), "T");
  if (j.contains("dt")) cfg.dt = num(j.at("dt"), "dt");
  if (j.contains("flow_dt")) cfg.flow_dt = num(j.at("flow_dt"), "flow_dt");
  if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
  if (j.contains("output_times")) cfg.output_times = num_list(j.at("output_times"), "output_times");
  if (j.contains("delta")) cfg.delta = num(j.at("delta"), "delta");
  if (j.contains("sweep_kind"))
    cfg.sweep_kind = parse_sweep_kind(str(j.at("sweep_kind"), "sweep_kind"));
  if (j.contains("lab_dt_factor")) cfg.lab_dt_factor = num(j.at("lab_dt_factor"), "lab_dt_factor");
  if (j.contains("snapshots")) cfg.snapshots = boolean(j.at("snapshots"), "snapshots");
  if (j.contains("diagnostics")) cfg.diagnostics = parse_diagnostics(j.at("diagnostics"));

  // scenario-shape requirements are schema-level
  const std::size_t np = cfg.packets.size();
  switch (cfg.scenario) {
    case Scenario::Classical:
      break;
    case Scenario::Gaussian:
    case Scenario::Single:
      if (np != 1) bad(scenario_name(cfg.scenario) + " takes exactly one packet");
      break;
    case Scenario::Superpose:
      if (np != 2) bad("superpose takes exactly two packets");
      break;
    case Scenario::Sweep:
      if (!j.contains("eps_list")) bad("sweep requires eps_list");
      if (cfg.eps_list.size() < 3) bad("sweep requires at least 3 eps values");
      if (cfg.sweep_kind == SweepKind::Superpose ? np != 2 : np != 1)
        bad("sweep packet count does not match the sweep_kind");
      break;
    case Scenario::Crossing:
      if (np != 2) bad("crossing takes exactly two packets");
      if (!j.contains("eps_list")) bad("crossing requires eps_list");
      break;
  }
  if (cfg.scenario == Scenario::Single && !j.contains("eps")) bad("single requires eps");
  if (cfg.scenario == Scenario::Superpose && !j.contains("eps")) bad("superpose requires eps");

  // diagnostics availability
  const DiagnosticsSpec& dg = cfg.diagnostics;
  auto only = [&](bool flag, const char* name, std::initializer_list<Scenario> where) {
    if (!flag) return;
    for (Scenario s : where)
      if (cfg.scenario == s) return;
    bad(std::string("diagnostic '") + name + "' is not available in scenario '" +
        scenario_name(cfg.scenario) + "'");
  };
  only(dg.gauge_check, "gauge_check", {Scenario::Single, Scenario::Superpose});
  only(dg.tensor_check, "tensor_check", {Scenario::Single});
  only(dg.strang_order, "strang_order", {Scenario::Single, Scenario::Superpose});
  only(dg.moment_growth, "moment_growth", {Scenario::Gaussian});
  only(dg.tau_analytics, "tau_analytics", {Scenario::Gaussian});
  only(dg.interaction, "interaction", {Scenario::Superpose});
  if (dg.tensor_check && (!cfg.grid || cfg.grid->dim() != 2))
    bad("tensor_check needs a 2-d grid");

  constrain(cfg);
  return cfg;
}

std::string resolve_output_dir(const std::string& configured) {
  std::filesystem::path p(configured);
  if (p.is_absolute()) return p.string();
  if (const char* root = std::getenv("LOGNLS_OUTPUT_ROOT"); root && *root)
    return (std::filesystem::path(root) / p).string();
  return p.string();
}

std::vector<std::string> list_scenarios() {
  return {
      "classical   Hamiltonian flow q' = p, p' = -grad V with the action integral; checks "
      "energy conservation. Keys: potential, packets, T, flow_dt. Output: trajectory CSVs.",
      "gaussian    Gaussian-closure ODE path: width factors tau_j, coefficients a_j, amplitude "
      "b with the inverse-width mass law. Keys: potential, packets[1], lambda, T, flow_dt; "
      "diagnostics tau_analytics / moment_growth. Output: closure CSV.",
      "single      One-packet moving-frame envelope solve against its quadratic-Hessian limit "
      "at fixed eps; the L2 gap equals the lab-frame approximation error. Keys: potential, "
      "packets[1], lambda, alpha, eps, grid, T, dt. Output: records.csv (one record).",
      "superpose   Two-packet lab solve against the sum of the one-packet approximations at "
      "fixed eps. Keys: potential, packets[2], lambda, alpha, eps, T, lab_dt_factor; "
      "diagnostics interaction (defect far/near ratio). Output: records.csv (one record).",
      "sweep       Error-vs-eps scaling study with log-log slope fits; sweep_kind selects the "
      "compared pair: linear (eps-dependent vs limiting envelope, lambda = 0), subcritical "
      "(nonlinear vs linear flow, alpha > 1, rate ~ eps^(alpha-1)), critical (exact vs "
      "limiting envelope at alpha = 1, rate ~ sqrt(eps)), superpose (lab two-packet defect, "
      "rate ~ sqrt(eps) through a trajectory crossing). Keys: sweep_kind, potential, packets, "
      "lambda, alpha, eps_list, grid, T, dt. Output: records.csv + summary.json fits.",
      "crossing    Lebesgue measure of the near-approach set { t <= T : |q1 - q2| <= eps^gamma "
      "} across eps_list; the measure scales like eps^gamma for transversal crossings. Keys: "
      "potential, packets[2], eps_list, gamma, T, flow_dt. Output: records.csv + fit.",
  };
}

}  // namespace lognls
