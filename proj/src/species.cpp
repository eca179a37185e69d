#include "rwcool/species.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwcool/constants.hpp"

namespace rwcool {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("AtomicSpecies: ") + what +
                                " must be positive and finite");
  }
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

AtomicSpecies::AtomicSpecies(double mass_kg, double wavelength_m, double gamma0_rad_s)
    : mass_(mass_kg), wavelength_(wavelength_m), gamma0_(gamma0_rad_s) {
  require_positive(mass_, "mass");
  require_positive(wavelength_, "wavelength");
  require_positive(gamma0_, "gamma0");

  using namespace constants;
  k_ = two_pi / wavelength_;
  const double momentum = hbar * k_;
  recoil_energy_ = momentum * momentum / (2.0 * mass_);
  v_rec_ = 5.0 * momentum / (6.0 * mass_);
  doppler_limit_ = hbar * gamma0_ / (2.0 * boltzmann);
}

AtomicSpecies AtomicSpecies::beryllium9() {
  using namespace constants;
  // Neutral 9Be atomic mass minus one electron.
  const double ion_mass = 9.0121831 * atomic_mass_unit - electron_mass;
  return AtomicSpecies(ion_mass, 313.0e-9, two_pi * 18.0e6);
}

AtomicSpecies AtomicSpecies::preset(std::string_view name) {
  const std::string key = lowercase(name);
  if (key == "be9" || key == "9be+" || key == "be9+" || key == "9be") {
    return beryllium9();
  }
  throw std::invalid_argument("unknown species preset '" + std::string(name) + "'");
}

}  // namespace rwcool
