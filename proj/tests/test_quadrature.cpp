#include <cmath>
#include <limits>

#include "doctest.h"
#include "rwcool/constants.hpp"
#include "rwcool/quadrature.hpp"

using namespace rwcool;

TEST_CASE("Gauss-Hermite closed forms") {
  const auto one = gauss_hermite(1);
  REQUIRE(one.nodes.size() == 1);
  CHECK(one.nodes[0] == doctest::Approx(0.0));
  CHECK(one.weights[0] == doctest::Approx(constants::sqrt_pi).epsilon(1e-15));

  const auto two = gauss_hermite(2);
  CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(constants::sqrt_pi / 2.0).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(constants::sqrt_pi / 2.0).epsilon(1e-15));
}

TEST_CASE("Gauss-Hermite order 40 integrates Gaussian moments") {
  const auto rule = gauss_hermite(40);
  double w = 0.0, m2 = 0.0, m4 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.nodes[i];
    w += rule.weights[i];
    m1 += rule.weights[i] * v;
    m2 += rule.weights[i] * v * v;
    m4 += rule.weights[i] * v * v * v * v;
    if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
  CHECK(w == doctest::Approx(constants::sqrt_pi).epsilon(1e-13));
  CHECK(std::abs(m1) < 1e-13);
  CHECK(m2 == doctest::Approx(constants::sqrt_pi / 2.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0 * constants::sqrt_pi / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(201), std::invalid_argument);
}

TEST_CASE("adaptive integration of simple integrands") {
  CHECK(integrate_1d([](double x) { return x * x; }, 0.0, 1.0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_1d([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0).value ==
        doctest::Approx(constants::pi / 2.0).epsilon(1e-8));

  const double c = 0.37;
  const double eps = 1e-3;
  const double exact = (std::atan((1.0 - c) / eps) + std::atan(c / eps)) / eps;
  const auto lorentz =
      integrate_1d([&](double x) { return 1.0 / (eps * eps + (x - c) * (x - c)); }, 0.0, 1.0);
  CHECK(lorentz.value == doctest::Approx(exact).epsilon(1e-8));
  CHECK(lorentz.error <= 1e-8 * std::abs(lorentz.value));
}

TEST_CASE("adaptive integration is invariant under interval splitting") {
  auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x) + 1.0 / (0.01 + x * x); };
  const auto whole = integrate_1d(f, -1.0, 2.0);
  const auto left = integrate_1d(f, -1.0, 0.3);
  const auto right = integrate_1d(f, 0.3, 2.0);
  CHECK(std::abs(whole.value - (left.value + right.value)) <=
        whole.error + left.error + right.error + 1e-13 * std::abs(whole.value));
}

TEST_CASE("adaptive integration reports failures") {
  const QuadratureSpec starved{1e-14, 0.0, 2};
  CHECK_THROWS_AS(
      integrate_1d([](double x) { return 1.0 / (1e-8 + x * x); }, -1.0, 1.0, starved),
      QuadratureError);
  CHECK_THROWS_AS(integrate_1d([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                               0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(validate(QuadratureSpec{-1.0, 0.0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(validate(QuadratureSpec{1e-8, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("disk integration") {
  const double r = 225e-6;
  const QuadratureSpec spec{1e-10, 0.0, 2000};
  CHECK(integrate_disk_xy([](double, double) { return 1.0; }, r, spec).value ==
        doctest::Approx(constants::pi * r * r).epsilon(1e-10));
  const auto spheroid = integrate_disk_xy(
      [&](double x, double y) { return std::sqrt(std::max(0.0, 1.0 - (x * x + y * y) / (r * r))); },
      r, spec);
  CHECK(spheroid.value == doctest::Approx(2.0 / 3.0 * constants::pi * r * r).epsilon(1e-8));

  const QuadratureSpec with_abs{1e-10, 1e-20, 2000};
  const auto odd = integrate_disk_xy([&](double x, double y) { return y * (1.0 + x * x / (r * r)); },
                                     r, with_abs);
  CHECK(std::abs(odd.value) <= 1e-20);
}

TEST_CASE("velocity moments: flat line and wide-line closed form") {
  const VelocityIntegrator vi;
  // slope = 0 removes the velocity dependence.
  const auto flat = vi.moments(2.0, 1.5, 0.0);
  CHECK(flat.zeroth == doctest::Approx(1.0 / (2.0 + 2.25)).epsilon(1e-13));
  CHECK(std::abs(flat.first) < 1e-14);
  // Small slope: first-order expansion <v (1 - 2 c s v / D) / D> = c s / D^2.
  const double s = 1e-4;
  const auto tilted = vi.moments(2.0, 1.5, s);
  const double d = 2.0 + 2.25;
  CHECK(tilted.first == doctest::Approx(1.5 * s / (d * d)).epsilon(1e-6));
}

TEST_CASE("Gauss-Hermite and adaptive velocity moments agree for balance integrands") {
  const VelocityIntegrator vi;
  for (double floor : {1.0, 1.6, 2.0}) {
    for (double center : {-9.0, -3.0, -0.4, 0.0, 1.2, 5.0}) {
      for (double slope : {0.02, 0.1, 0.5, 1.0}) {
        const auto gh = vi.moments_hermite(floor, center, slope);
        const auto ad = vi.moments_adaptive(floor, center, slope);
        CHECK(gh.zeroth == doctest::Approx(ad.zeroth).epsilon(1e-6));
        const double scale = std::max(std::abs(ad.first), 1e-3 * ad.zeroth);
        CHECK(std::abs(gh.first - ad.first) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("narrow lines switch to the adaptive route") {
  const VelocityIntegrator vi;
  CHECK_FALSE(vi.is_narrow(1.0, 0.5));
  CHECK(vi.is_narrow(1.0, 5.0));
  // Width 0.02 in v units: an order-40 rule misses the peak; the router does not.
  const auto routed = vi.moments(1.0, 0.3, 50.0);
  const auto adaptive = vi.moments_adaptive(1.0, 0.3, 50.0);
  CHECK(routed.zeroth == adaptive.zeroth);
  // Peak area sqrt(pi) e^{-v0^2} / slope; the Lorentzian tails lower it by about 2%.
  const double v0 = 0.3 / 50.0;
  const double peak_area = std::exp(-v0 * v0) * constants::sqrt_pi / 50.0;
  CHECK(adaptive.zeroth < peak_area);
  CHECK(adaptive.zeroth == doctest::Approx(peak_area).epsilon(0.03));
  CHECK_THROWS_AS(VelocityIntegrator(0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityIntegrator(40, -1.0), std::invalid_argument);
}
