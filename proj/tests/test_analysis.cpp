#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lognls/report.hpp"

using namespace lognls;

namespace {

std::vector<SweepRecord> synthetic_curve(double slope, double scale,
                                         const std::vector<double>& eps) {
  std::vector<SweepRecord> recs;
  for (double e : eps) {
    SweepRecord r;
    r.eps = e;
    r.T = 1.0;
    r.times = {1.0};
    r.errors = {scale * std::pow(e, slope)};
    r.scenario = "synthetic";
    r.path = "y-frame";
    r.dt = 1e-3;
    recs.push_back(r);
  }
  return recs;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("slope fit recovers exact power laws") {
  const std::vector<double> eps = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3};
  for (double s : {0.5, 1.0}) {
    SlopeFit fit = fit_slope(synthetic_curve(s, 0.3, eps), 0);
    CHECK(fit.slope == doctest::Approx(s).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.n_used == 5);
  }
}

TEST_CASE("fit drops noise-floor errors and demands 3 usable points") {
  const std::vector<double> eps = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3};
  std::vector<SweepRecord> recs = synthetic_curve(1.0, 1.0, eps);
  recs[3].errors[0] = 1e-12;  // below the 1e-9 floor
  recs[4].errors[0] = 1e-13;
  SlopeFit fit = fit_slope(recs, 0);
  CHECK(fit.n_used == 3);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-10));
  recs[2].errors[0] = 0.0;
  CHECK_THROWS_AS(fit_slope(recs, 0), ConstraintError);
}

TEST_CASE("sup-fit uses the worst output time per record") {
  std::vector<SweepRecord> recs = synthetic_curve(1.0, 1.0, {1e-1, 1e-2, 1e-3});
  for (SweepRecord& r : recs) {
    r.times = {0.5, 1.0};
    r.errors = {r.errors[0], 2.0 * r.errors[0]};
  }
  SlopeFit fit = fit_slope_sup(recs);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("moment norm matches the closed-form Gaussian moments") {
  Grid g = Grid::make({AxisSpec{-24.0, 24.0, 512}});
  Potential V = Potential::zero(1);
  Trajectory tr = integrate_flow(V, {0.0}, {0.0}, 1.0, 1e-4);
  ClosurePath cp = gaussian_closure(V, tr, {cdouble(1.0, 0.0)}, 0.7, 0.0, 1.0, 1e-4);
  WaveField f = synthesize_envelope(cp, 0.5, g);
  for (unsigned m : {0u, 1u, 2u, 3u}) {
    MomentDiag diag;
    const double grid_val = moment_norm(f, {m}, &diag);
    CHECK(grid_val == doctest::Approx(gaussian_l2_moment(cp, 0.5, {m})).epsilon(1e-8));
    CHECK(diag.reliable);
  }
}

TEST_CASE("moment norm flags boundary-dominated weights") {
  Grid g = Grid::make({AxisSpec{-4.0, 4.0, 128}});
  WaveField wide = sample_function(g, [](const double* y) {
    return std::exp(-0.05 * y[0] * y[0]);  // barely decays inside the box
  });
  MomentDiag diag;
  moment_norm(wide, {3}, &diag);
  CHECK(diag.boundary_fraction > 0.01);
  CHECK_FALSE(diag.reliable);
}

TEST_CASE("interaction defect of identical packets is 2 lambda log 4 times the state") {
  Grid g = Grid::make({AxisSpec{-8.0, 8.0, 256}});
  WaveField psi = sample_function(g, [](const double* x) {
    return std::exp(-x[0] * x[0]) * std::polar(1.0, 3.0 * x[0]);
  });
  const double lambda = -1.0;
  const double got = interaction_norm(psi, psi, lambda, 0.0);
  const double expect = 2.0 * std::abs(lambda) * std::log(4.0) * l2_norm(psi);
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("interaction defect vanishes for far-separated packets") {
  Grid g = Grid::make({AxisSpec{-12.0, 12.0, 512}});
  WaveField a = sample_function(g, [](const double* x) {
    const double z = x[0] + 6.0;
    return std::exp(-8.0 * z * z);
  });
  WaveField b = sample_function(g, [](const double* x) {
    const double z = x[0] - 6.0;
    return std::exp(-8.0 * z * z);
  });
  CHECK(interaction_norm(a, b, -1.0, 0.0) < 1e-10);
}

TEST_CASE("interaction profile localizes the defect at the trajectory crossing") {
  // free head-on packets: q1 = -1 + t, q2 = 1 - t, crossing at t = 1
  Potential V = Potential::zero(1);
  const double T = 2.0, eps = 1e-2;
  Trajectory tr1 = integrate_flow(V, {-1.0}, {1.0}, T, 1e-3);
  Trajectory tr2 = integrate_flow(V, {1.0}, {-1.0}, T, 1e-3);
  ClosurePath cp1 = gaussian_closure(V, tr1, {cdouble(1.0, 0.0)}, 1.0, -1.0, T, 1e-3);
  ClosurePath cp2 = gaussian_closure(V, tr2, {cdouble(1.0, 0.0)}, 1.0, -1.0, T, 1e-3);
  Grid xg = lab_grid(-8.0, 8.0, eps, 1.0);
  std::vector<double> times(65);
  for (int k = 0; k <= 64; ++k) times[k] = T * k / 64.0;

  InteractionProfile pr = interaction_profile(tr1, cp1, tr2, cp2, eps, 1.0, -1.0, xg, times);

  REQUIRE(pr.times.size() == 65);
  CHECK(pr.separation[0] == doctest::Approx(2.0));
  CHECK(pr.separation[32] < 1e-10);  // the crossing sample
  CHECK(pr.sep_needed[0] == doctest::Approx(1.0));  // 5 sqrt(eps) * 2 / sqrt(Re a0)
  const double peak = *std::max_element(pr.defect.begin(), pr.defect.end());
  CHECK(pr.near_value == doctest::Approx(peak).epsilon(1e-6));
  CHECK(pr.far_max >= 0.0);
  CHECK(pr.ratio < 1e-3);

  CHECK_THROWS_AS(interaction_profile(tr1, cp1, tr2, cp2, eps, 1.0, -1.0, xg, {}),
                  ConstraintError);
}

TEST_CASE("pointwise log-Lipschitz gap: antipodal oracle and random scan") {
  CHECK(log_lipschitz_gap(cdouble(1.0, 0.0), cdouble(-1.0, 0.0)) == doctest::Approx(8.0));
  // with z1 = 0 the product (z2 log|z2|^2) conj(z2) is real, so the gap is 2|z2|^2
  CHECK(log_lipschitz_gap(cdouble(0.0, 0.0), cdouble(2.0, 0.0)) == doctest::Approx(8.0));
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> mag(-6.0, 6.0), arg(0.0, 6.2831853);
  double worst = 1.0;
  for (int i = 0; i < 100000; ++i) {
    const cdouble z1 = std::polar(std::pow(10.0, mag(rng)), arg(rng));
    const cdouble z2 = std::polar(std::pow(10.0, mag(rng)), arg(rng));
    worst = std::min(worst, log_lipschitz_gap(z1, z2));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("report round-trips records, fits and checks") {
  namespace fs = std::filesystem;
  const std::string dir = "report_roundtrip_out";
  fs::remove_all(dir);

  std::vector<SweepRecord> recs = synthetic_curve(0.5, 1.0, {1e-1, 1e-2});
  recs[0].delta = 1e-15;
  recs[0].mass_drift = 2e-12;
  std::vector<FitSummary> fits;
  fits.push_back(FitSummary{"slope_final", fit_slope(synthetic_curve(0.5, 1.0,
      {1e-1, 1e-2, 1e-3}), 0)});
  std::vector<CheckResult> checks;
  checks.push_back(CheckResult{"mass_drift", 2e-12, 1e-8, true, false});
  emit_report(recs, fits, checks, "synthetic", dir);

  std::ifstream csv(dir + "/records.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "eps,T,t,error,scenario,path,dt,delta,mass_drift");
  std::string row;
  std::getline(csv, row);
  std::istringstream ss(row);
  std::string cell;
  std::getline(ss, cell, ',');
  CHECK(cell == "0.10000000000000001");  // %.17g of 0.1

  std::ifstream js(dir + "/summary.json");
  REQUIRE(js.good());
  nlohmann::json j = nlohmann::json::parse(js);
  CHECK(j["scenario"] == "synthetic");
  CHECK(j["record_count"] == 2);
  CHECK(j["fits"]["slope_final"]["slope"].get<double>() == doctest::Approx(0.5));
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(j["all_checks_pass"] == true);
  fs::remove_all(dir);
}

TEST_CASE("report rejects ragged records") {
  std::vector<SweepRecord> recs = synthetic_curve(0.5, 1.0, {1e-1});
  recs[0].errors.push_back(1.0);  // now 2 errors vs 1 time
  CHECK_THROWS_AS(emit_report(recs, {}, {}, "bad", "report_ragged_out"), ConstraintError);
  std::filesystem::remove_all("report_ragged_out");
}

TEST_CASE("trajectory and closure CSV writers emit well-formed tables") {
  namespace fs = std::filesystem;
  Potential V = Potential::harmonic({1.0});
  Trajectory tr = integrate_flow(V, {1.0}, {0.0}, 0.2, 0.1);
  save_trajectory_csv(tr, V, "traj_out.csv");
  std::ifstream f("traj_out.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,q0,p0,S,E");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == tr.samples());
  fs::remove("traj_out.csv");

  ClosurePath cp = gaussian_closure(V, tr, {cdouble(1.0, 0.0)}, 1.0, 0.0, 0.2, 0.1);
  save_closure_csv(cp, "closure_out.csv");
  std::ifstream g("closure_out.csv");
  std::getline(g, header);
  CHECK(header == "t,tau0,taudot0,re_a0,im_a0,re_b,im_b");
  rows = 0;
  while (std::getline(g, line)) ++rows;
  CHECK(rows == cp.samples());
  fs::remove("closure_out.csv");
}

TEST_CASE("error_curve rejects invalid eps lists") {
  SweepSpec sp;
  sp.V = Potential::harmonic({1.0});
  PacketSpec pk;
  pk.a0 = {1.0};
  pk.b0 = 1.0;
  pk.q0 = {1.0};
  pk.p0 = {0.0};
  sp.packets = {pk};
  sp.ygrid = Grid::make({AxisSpec{-12.0, 12.0, 128}});
  CHECK_THROWS_AS(error_curve(sp, {0.1, 2.0}), ConstraintError);
  CHECK_THROWS_AS(error_curve(sp, {0.1, -0.5}), ConstraintError);
}

TEST_SUITE_END();
