#include <cmath>

#include "doctest.h"
#include "rwcool/balance.hpp"
#include "rwcool/constants.hpp"
#include "rwcool/equilibrium.hpp"

using namespace rwcool;

namespace {

const AtomicSpecies be = AtomicSpecies::beryllium9();

}  // namespace

TEST_CASE("linear cooling function has a stable root") {
  const double u0 = 1.7;
  const auto r = find_equilibrium(be, [&](double u) { return u0 - u; });
  REQUIRE(r.converged());
  CHECK(r.u_star == doctest::Approx(u0).epsilon(1e-6));
  CHECK(r.stability == Stability::stable);
  CHECK(r.temperature == doctest::Approx(temperature_of_u(be, r.u_star)));
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].u_low <= r.u_star);
  CHECK(r.u_star <= r.crossings[0].u_high);
}

TEST_CASE("heating above a point is runaway") {
  const auto r = find_equilibrium(be, [](double u) { return u - 1.7; });
  CHECK(r.status == EquilibriumStatus::runaway_heating);
  CHECK_FALSE(r.converged());
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].kind == Stability::unstable);
}

TEST_CASE("cooling everywhere reports no root") {
  const auto r = find_equilibrium(be, [](double) { return -1.0; });
  CHECK(r.status == EquilibriumStatus::no_root);
  CHECK(r.crossings.empty());
  const auto z = find_equilibrium(be, [](double) { return 0.0; });
  CHECK(z.status == EquilibriumStatus::no_root);
}

TEST_CASE("smallest stable root is chosen and all crossings are listed") {
  // Stable at 0.5 and 8, unstable at 2.
  auto f = [](double u) { return (0.5 - u) * (u - 2.0) * (u - 8.0); };
  const auto r = find_equilibrium(be, f);
  REQUIRE(r.converged());
  CHECK(r.u_star == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.crossings.size() == 3);
  CHECK(r.crossings[1].kind == Stability::unstable);
}

TEST_CASE("stability holds at every converged root") {
  const RootConfig cfg;
  for (double u0 : {0.002, 0.05, 1.0, 30.0}) {
    auto f = [&](double u) { return std::log(u0 / u); };
    const auto r = find_equilibrium(be, f, cfg);
    REQUIRE(r.converged());
    CHECK(f(r.u_star * (1.0 + cfg.stability_epsilon)) < 0.0);
    CHECK(f(r.u_star * (1.0 - cfg.stability_epsilon)) > 0.0);
  }
}

TEST_CASE("doubling the scan density finds the same root") {
  auto f = [](double u) { return std::tanh(3.0 * (0.9 - u)) + 0.01 * std::sin(u); };
  RootConfig dense;
  dense.scan_points = 128;
  const auto a = find_equilibrium(be, f);
  const auto b = find_equilibrium(be, f, dense);
  REQUIRE(a.converged());
  REQUIRE(b.converged());
  CHECK(a.u_star == doctest::Approx(b.u_star).epsilon(2e-6));
}

TEST_CASE("constant heating never lowers the root") {
  auto base = [](double u) { return 1.0 / u - u * u; };
  double last = 0.0;
  for (double heat : {0.0, 0.1, 0.5, 2.0}) {
    const auto r = find_equilibrium(be, [&](double u) { return base(u) + heat; });
    REQUIRE(r.converged());
    CHECK(r.u_star >= last);
    last = r.u_star;
  }
}

TEST_CASE("non-finite balance values are reported") {
  CHECK_THROWS_AS(find_equilibrium(be, [](double) { return std::nan(""); }), EvaluationError);
}

TEST_CASE("root configuration validation") {
  RootConfig bad;
  bad.u_min = 2.0;
  bad.u_max = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  RootConfig few;
  few.scan_points = 1;
  CHECK_THROWS_AS(validate(few), std::invalid_argument);
  RootConfig eps;
  eps.stability_epsilon = 0.0;
  CHECK_THROWS_AS(validate(eps), std::invalid_argument);
  CHECK(to_string(EquilibriumStatus::runaway_heating) == "runaway_heating");
}

TEST_CASE("trough temperature of the 45 kHz, 30 um configuration") {
  const CrystalState crystal{225e-6, 2.77e9, constants::two_pi * 45e3};
  const PerpBeam beam{0.5, 30e-6, 14e-6, -constants::two_pi * 25e6};
  auto f = [&](double u) {
    return total_balance_full(be, beam, crystal, ThermalState{u}, ParBeam{}).total_rate;
  };
  const auto r = find_equilibrium(be, f);
  REQUIRE(r.converged());
  CHECK(r.temperature == doctest::Approx(0.63e-3).epsilon(0.1));
  CHECK(r.temperature == doctest::Approx(0.63351e-3).epsilon(1e-4));
  const auto at = total_balance_full(be, beam, crystal, ThermalState{r.u_star}, ParBeam{});
  CHECK(std::abs(at.total_rate) <= 1e-6 * std::abs(at.laser_rate));
  CHECK(r.u_star == find_equilibrium(be, f).u_star);
}

TEST_CASE("parallel heating raises the equilibrium temperature monotonically") {
  const CrystalState crystal{225e-6, 2.77e9, constants::two_pi * 45e3};
  const PerpBeam beam{0.5, 30e-6, 14e-6, -constants::two_pi * 25e6};
  double last = 0.0;
  for (double s : {0.0, 0.05, 0.1, 0.2}) {
    auto f = [&](double u) {
      return total_balance_full(be, beam, crystal, ThermalState{u}, ParBeam{s}).total_rate;
    };
    const auto r = find_equilibrium(be, f);
    REQUIRE(r.converged());
    CHECK(r.temperature > last);
    last = r.temperature;
  }
}
