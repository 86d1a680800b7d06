#include <cmath>
#include <vector>

#include "doctest.h"
#include "lognls/potential.hpp"

using namespace lognls;

TEST_SUITE_BEGIN("potentials");

namespace {

// central difference quotients used as an independent cross-check
double num_grad(const Potential& V, std::vector<double> x, std::size_t j, double h = 1e-5) {
  x[j] += h;
  const double up = V.value(x.data());
  x[j] -= 2.0 * h;
  const double dn = V.value(x.data());
  return (up - dn) / (2.0 * h);
}

double num_hess(const Potential& V, std::vector<double> x, std::size_t j, double h = 1e-4) {
  const double mid = V.value(x.data());
  x[j] += h;
  const double up = V.value(x.data());
  x[j] -= 2.0 * h;
  const double dn = V.value(x.data());
  return (up + dn - 2.0 * mid) / (h * h);
}

}  // namespace

TEST_CASE("harmonic values, gradient and hessian") {
  Potential V = Potential::harmonic({1.0, 2.0});
  const double x[2] = {0.5, -1.5};
  CHECK(V.value(x) == doctest::Approx(0.5 * 0.25 + 0.5 * 4.0 * 2.25).epsilon(1e-15));
  double grad[2], hd[2];
  V.gradient(x, grad);
  CHECK(grad[0] == doctest::Approx(0.5));
  CHECK(grad[1] == doctest::Approx(4.0 * -1.5));
  V.hessian_diag(x, hd);
  CHECK(hd[0] == doctest::Approx(1.0));
  CHECK(hd[1] == doctest::Approx(4.0));
  CHECK(V.quadratic());
  CHECK(V.third_derivative_bound() == 0.0);
}

TEST_CASE("inverted harmonic is the sign flip of harmonic") {
  Potential V = Potential::inverted_harmonic(0.7, 2);
  const double x[2] = {1.0, -2.0};
  CHECK(V.value(x) == doctest::Approx(-0.5 * 0.49 * 5.0).epsilon(1e-15));
  double hd[2];
  V.hessian_diag(x, hd);
  CHECK(hd[0] == doctest::Approx(-0.49));
  CHECK(hd[1] == doctest::Approx(-0.49));
  CHECK(V.quadratic());
}

TEST_CASE("cosine family values and derivative bound") {
  Potential V = Potential::cosine({2.0, -0.5});
  const double x[2] = {0.3, 1.1};
  CHECK(V.value(x) == doctest::Approx(2.0 * std::cos(0.3) - 0.5 * std::cos(1.1)).epsilon(1e-15));
  CHECK_FALSE(V.quadratic());
  CHECK(V.third_derivative_bound() == doctest::Approx(2.5));
}

TEST_CASE("analytic derivatives agree with difference quotients") {
  std::vector<Potential> pots = {
      Potential::harmonic({1.3, 0.4}),
      Potential::inverted_harmonic(0.9, 2),
      Potential::cosine({1.0, 0.25}),
      Potential::harmonic_cosine({0.8, 1.1}, {0.5, -0.2}),
  };
  const std::vector<double> x = {0.37, -0.81};
  for (const Potential& V : pots) {
    double grad[2], hd[2];
    V.gradient(x.data(), grad);
    V.hessian_diag(x.data(), hd);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(grad[j] == doctest::Approx(num_grad(V, x, j)).epsilon(1e-8));
      CHECK(hd[j] == doctest::Approx(num_hess(V, x, j)).epsilon(1e-6));
    }
  }
}

TEST_CASE("full hessian of separable families is diagonal") {
  Potential V = Potential::harmonic_cosine({1.0, 2.0}, {0.3, 0.7});
  const double x[2] = {0.2, -0.4};
  std::vector<double> H = V.hessian(x);
  double hd[2];
  V.hessian_diag(x, hd);
  CHECK(H[0] == doctest::Approx(hd[0]));
  CHECK(H[3] == doctest::Approx(hd[1]));
  CHECK(H[1] == 0.0);
  CHECK(H[2] == 0.0);
}

TEST_CASE("taylor remainder is exact for quadratics") {
  Potential V = Potential::harmonic({1.0, 2.0});
  const double q[2] = {0.7, -0.3};
  const double y[2] = {1.2, 0.5};
  // remainder of a quadratic is its own second-order term, eps-independent
  const double expect = 0.5 * (1.0 * 1.2 * 1.2 + 4.0 * 0.5 * 0.5);
  for (double eps : {1.0, 0.1, 1e-3}) {
    CHECK(V.taylor_quadratic_remainder(q, eps, y) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("taylor remainder of cosine matches the closed form") {
  Potential V = Potential::cosine({1.0});
  const double q[1] = {0.4};
  const double y[1] = {2.0};
  const double eps = 0.01;
  const double r = std::sqrt(eps);
  // (1/eps) [ cos(q + r y) - cos(q) + r y sin(q) ]
  const double expect =
      (std::cos(q[0] + r * y[0]) - std::cos(q[0]) + r * y[0] * std::sin(q[0])) / eps;
  CHECK(V.taylor_quadratic_remainder(q, eps, y) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(V.taylor_quadratic_remainder(q, 0.0, y), ConstraintError);
}

TEST_CASE("remainder converges to the frozen-hessian quadratic as eps -> 0") {
  Potential V = Potential::cosine({1.0});
  const double q[1] = {0.4};
  const double y[1] = {1.5};
  const double quad = 0.5 * (-std::cos(q[0])) * y[0] * y[0];
  double prev = 0.0;
  for (double eps : {1e-2, 1e-4}) {
    const double diff = std::abs(V.taylor_quadratic_remainder(q, eps, y) - quad);
    if (prev > 0.0) CHECK(diff < 0.15 * prev);  // O(sqrt(eps)) gap: ~0.1x per 100x in eps
    prev = diff;
  }
}

TEST_CASE("component extracts the 1-d axis factor") {
  Potential V = Potential::harmonic_cosine({1.0, 2.0}, {0.3, 0.7});
  Potential V0 = V.component(0);
  Potential V1 = V.component(1);
  REQUIRE(V0.dim() == 1);
  const double x2[2] = {0.9, -1.4};
  const double a[1] = {0.9}, b[1] = {-1.4};
  CHECK(V0.value(a) + V1.value(b) == doctest::Approx(V.value(x2)).epsilon(1e-15));
}

TEST_CASE("zero potential") {
  Potential V = Potential::zero(3);
  const double x[3] = {1.0, 2.0, 3.0};
  CHECK(V.value(x) == 0.0);
  CHECK(V.quadratic());
  CHECK(V.dim() == 3);
}

TEST_SUITE_END();
