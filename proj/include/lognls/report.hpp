#pragma once

#include <string>
#include <vector>

#include "lognls/analysis.hpp"
#include "lognls/closure.hpp"

namespace lognls {

/// Named pass/fail check carried into the JSON summary.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;   // value <= threshold unless invert
  bool invert = false; // pass means value >= threshold
};

struct FitSummary {
  std::string name;
  SlopeFit fit;
};

/// Writes <dir>/records.csv with the fixed column set
///   eps,T,t,error,scenario,path,dt,delta,mass_drift
/// (one row per record and output time, %.17g floats, byte-reproducible) and
/// <dir>/summary.json holding the fits, checks and metadata. Throws Error on
/// I/O failure.
void emit_report(const std::vector<SweepRecord>& records, const std::vector<FitSummary>& fits,
                 const std::vector<CheckResult>& checks, const std::string& scenario,
                 const std::string& dir);

/// Trajectory CSV: t,q0..,p0..,S,E.
void save_trajectory_csv(const Trajectory& tr, const Potential& V, const std::string& path);

/// Closure CSV: t,tau_j,taudot_j,re_a_j,im_a_j,re_b,im_b.
void save_closure_csv(const ClosurePath& cp, const std::string& path);

/// %.17g formatting helper shared by all writers (locale-independent).
std::string format_double(double v);

}  // namespace lognls
