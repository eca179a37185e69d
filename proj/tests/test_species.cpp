#include <cmath>

#include "doctest.h"
#include "rwcool/constants.hpp"
#include "rwcool/equilibrium.hpp"
#include "rwcool/species.hpp"

using namespace rwcool;

TEST_CASE("beryllium preset derives recoil velocity and Doppler limit") {
  const auto be = AtomicSpecies::beryllium9();
  const double mass = 9.0121831 * constants::atomic_mass_unit - constants::electron_mass;
  const double k = constants::two_pi / 313e-9;
  CHECK(be.mass() == doctest::Approx(mass).epsilon(1e-15));
  CHECK(be.wave_number() == doctest::Approx(k).epsilon(1e-15));
  CHECK(be.gamma0() == doctest::Approx(constants::two_pi * 18e6).epsilon(1e-15));
  CHECK(be.recoil_velocity() == doctest::Approx(5.0 * constants::hbar * k / (6.0 * mass)));
  CHECK(be.recoil_velocity() == doctest::Approx(0.118).epsilon(0.01));
  CHECK(be.doppler_limit() == doctest::Approx(0.44e-3).epsilon(0.02));
  CHECK(be.recoil_energy() ==
        doctest::Approx(std::pow(constants::hbar * k, 2) / (2.0 * mass)).epsilon(1e-14));
}

TEST_CASE("presets are looked up case-insensitively") {
  for (const char* name : {"be9", "Be9", "9Be+", "BE9+", "9be"}) {
    CHECK(AtomicSpecies::preset(name).mass() == AtomicSpecies::beryllium9().mass());
  }
  CHECK_THROWS_AS(AtomicSpecies::preset("ca40"), std::invalid_argument);
}

TEST_CASE("species constructor rejects nonphysical values") {
  CHECK_THROWS_AS(AtomicSpecies(0.0, 313e-9, 1e8), std::invalid_argument);
  CHECK_THROWS_AS(AtomicSpecies(1e-26, -1.0, 1e8), std::invalid_argument);
  CHECK_THROWS_AS(AtomicSpecies(1e-26, 313e-9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(AtomicSpecies(std::nan(""), 313e-9, 1e8), std::invalid_argument);
}

TEST_CASE("temperature and thermal velocity conversions") {
  const auto be = AtomicSpecies::beryllium9();
  const double u = u_of_temperature(be, 0.44e-3);
  CHECK(u == doctest::Approx(std::sqrt(2.0 * constants::boltzmann * 0.44e-3 / be.mass())));
  CHECK(u == doctest::Approx(0.90).epsilon(0.01));
  CHECK(u_of_temperature(be, 4.0 * 0.44e-3) == doctest::Approx(2.0 * u).epsilon(1e-14));
  for (double t : {1e-6, 6.3e-4, 0.2}) {
    CHECK(temperature_of_u(be, u_of_temperature(be, t)) == doctest::Approx(t).epsilon(1e-14));
  }
  CHECK_THROWS_AS(temperature_of_u(be, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(u_of_temperature(be, -1.0), std::invalid_argument);
}
