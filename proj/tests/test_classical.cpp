#include <cmath>
#include <vector>

#include "doctest.h"
#include "lognls/classical.hpp"

using namespace lognls;

TEST_SUITE_BEGIN("classical");

TEST_CASE("free flow: straight line and kinetic action") {
  Trajectory tr = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 2.0, 1e-3);
  const std::size_t last = tr.samples() - 1;
  CHECK(tr.time(last) == doctest::Approx(2.0));
  CHECK(tr.q_at(last, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(tr.p_at(last, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(tr.S[last] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(tr.p_max() == doctest::Approx(1.0));
}

TEST_CASE("harmonic flow: cos/sin orbit and action -sin(2t)/4") {
  Trajectory tr = integrate_flow(Potential::harmonic({1.0}), {1.0}, {0.0}, 1.0, 1e-3);
  double q, p;
  tr.interp_q(1.0, &q);
  tr.interp_p(1.0, &p);
  CHECK(q == doctest::Approx(std::cos(1.0)).epsilon(1e-11));
  CHECK(p == doctest::Approx(-std::sin(1.0)).epsilon(1e-11));
  CHECK(tr.interp_S(1.0) == doctest::Approx(-std::sin(2.0) / 4.0).epsilon(1e-10));
  CHECK(max_energy_drift(Potential::harmonic({1.0}), tr) < 1e-12);
}

TEST_CASE("interpolation is linear between samples") {
  Trajectory tr = integrate_flow(Potential::zero(1), {0.0}, {2.0}, 1.0, 0.25);
  double q;
  tr.interp_q(0.375, &q);  // halfway between samples 1 and 2
  CHECK(q == doctest::Approx(0.5 * (tr.q_at(1, 0) + tr.q_at(2, 0))).epsilon(1e-15));
}

TEST_CASE("integrator is 4th order on a cosine potential") {
  Potential V = Potential::cosine({1.0});
  auto final_q = [&](double dt) {
    Trajectory tr = integrate_flow(V, {0.3}, {0.9}, 1.0, dt);
    return tr.q_at(tr.samples() - 1, 0);
  };
  const double ref = final_q(1.0 / 4096.0);
  const double e1 = std::abs(final_q(1.0 / 32.0) - ref);
  const double e2 = std::abs(final_q(1.0 / 64.0) - ref);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("energy is conserved to 1e-8 on the cosine well") {
  Potential V = Potential::harmonic_cosine({1.0}, {0.5});
  Trajectory tr = integrate_flow(V, {1.2}, {-0.4}, 10.0, 1e-3);
  CHECK(max_energy_drift(V, tr) < 1e-8);
}

TEST_CASE("hessian path samples V'' along the orbit") {
  // free orbit q(t) = t is exact for RK4, so the path is -2 cos(t)
  Trajectory tr = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, 0.01);
  SampledPath h = hessian_path(Potential::cosine({2.0}), tr);
  CHECK(h.at(0.0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(h.at(0.5, 0) == doctest::Approx(-2.0 * std::cos(0.5)).epsilon(1e-9));
  CHECK(h.at(1.0, 0) == doctest::Approx(-2.0 * std::cos(1.0)).epsilon(1e-9));
}

TEST_CASE("crossing measure: head-on pass spends h/2 below threshold") {
  // q_a = t, q_b = -t: separation 2t <= h exactly for t <= h/2
  Trajectory a = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, 1e-3);
  Trajectory b = integrate_flow(Potential::zero(1), {0.0}, {-1.0}, 1.0, 1e-3);
  CHECK(crossing_measure(a, b, 0.5) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("crossing measure: drive-by of a parked packet spends 2h") {
  // q_a = t passes q_b = 0.5: |t - 0.5| <= h for a window of length 2h
  Trajectory a = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, 1e-3);
  Trajectory b = integrate_flow(Potential::zero(1), {0.5}, {0.0}, 1.0, 1e-3);
  CHECK(crossing_measure(a, b, 0.1) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("crossing measure edge cases") {
  Trajectory a = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, 1e-3);
  Trajectory far = integrate_flow(Potential::zero(1), {5.0}, {1.0}, 1.0, 1e-3);
  CHECK(crossing_measure(a, far, 0.5) == 0.0);
  CHECK(crossing_measure(a, a, 0.5) == doctest::Approx(1.0));
  Trajectory other_clock = integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, 2e-3);
  CHECK_THROWS_AS(crossing_measure(a, other_clock, 0.5), ConstraintError);
}

TEST_CASE("flow validates its inputs") {
  CHECK_THROWS_AS(integrate_flow(Potential::zero(1), {0.0, 1.0}, {1.0}, 1.0, 1e-3),
                  ConstraintError);
  CHECK_THROWS_AS(integrate_flow(Potential::zero(1), {0.0}, {1.0}, 1.0, -1e-3),
                  ConstraintError);
}

TEST_SUITE_END();
