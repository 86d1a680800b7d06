#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lognls/analysis.hpp"

namespace lognls {

/// Scenario catalogue of the command-line driver.
enum class Scenario { Classical, Gaussian, Single, Superpose, Sweep, Crossing };

std::string scenario_name(Scenario s);

/// Optional extra checks attached to a run; results land in summary.json.
struct DiagnosticsSpec {
  bool gauge_check = false;        // size-scaling residual with k = 2
  bool tensor_check = false;       // d = 2 product-data factorization residual
  bool strang_order = false;       // step-halving convergence order
  std::size_t loglip_pairs = 0;    // random pointwise-gap sample count
  bool moment_growth = false;      // closure moment envelope up to |beta| <= 3
  bool tau_analytics = false;      // tau positivity + Riccati residual
  bool interaction = false;        // two-packet defect far/near localization ratio
};

/// Parsed and validated run configuration (JSON on disk). Schema errors throw
/// ConfigError (exit 2), physical-constraint violations ConstraintError
/// (exit 3), solver aborts SolverError (exit 4).
struct RunConfig {
  Scenario scenario = Scenario::Classical;
  std::string output_dir = "out";
  Potential V;
  double lambda = 0.0;
  double alpha = 1.0;
  double eps = 0.1;                  // single / superpose
  std::vector<double> eps_list;      // sweep / crossing
  double gamma = 0.4;                // crossing threshold exponent
  std::vector<PacketSpec> packets;
  double T = 1.0;
  double dt = 1e-3;
  double flow_dt = 1e-4;
  std::optional<Grid> grid;          // y-grid (single) or x-grid (superpose)
  std::vector<double> output_times;
  std::optional<double> delta;       // absolute override of the relative rule
  SweepKind sweep_kind = SweepKind::Critical;
  double lab_dt_factor = 1.0 / 16.0;
  bool snapshots = false;            // dump field CSVs at output times
  DiagnosticsSpec diagnostics;
};

/// Reads and validates a config file. The returned config is ready to run.
RunConfig load_config(const std::string& path);

/// Resolves the output directory: relative paths are placed under the
/// LOGNLS_OUTPUT_ROOT environment variable when it is set.
std::string resolve_output_dir(const std::string& configured);

/// Executes a validated config; writes reports under its output directory.
void run_config(const RunConfig& cfg);

/// One line per scenario: name, required keys, and the scaling law or
/// quantity the scenario reproduces.
std::vector<std::string> list_scenarios();

}  // namespace lognls
