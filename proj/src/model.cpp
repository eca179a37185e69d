#include "rwcool/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rwcool/constants.hpp"

namespace rwcool {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void validate(const PerpBeam& beam) {
  require(beam.s0 >= 0.0 && std::isfinite(beam.s0), "PerpBeam: s0 must be >= 0");
  require(beam.waist > 0.0 && std::isfinite(beam.waist), "PerpBeam: waist must be > 0");
  require(std::isfinite(beam.offset), "PerpBeam: offset must be finite");
  require(std::isfinite(beam.detuning), "PerpBeam: detuning must be finite");
}

void validate(const ParBeam& beam) {
  require(beam.s_par >= 0.0 && std::isfinite(beam.s_par), "ParBeam: s_par must be >= 0");
}

void validate(const CrystalState& crystal) {
  require(crystal.radius > 0.0 && std::isfinite(crystal.radius),
          "CrystalState: radius must be > 0");
  require(crystal.sigma0 > 0.0 && std::isfinite(crystal.sigma0),
          "CrystalState: sigma0 must be > 0");
  require(crystal.omega_r >= 0.0 && std::isfinite(crystal.omega_r),
          "CrystalState: omega_r must be >= 0");
}

void validate(const ThermalState& state) {
  require(state.u > 0.0 && std::isfinite(state.u), "ThermalState: u must be > 0");
}

double local_saturation(const PerpBeam& beam, double y) {
  const double s = (y - beam.offset) / beam.waist;
  return beam.s0 * std::exp(-2.0 * s * s);
}

double scatter_rate(const AtomicSpecies& species, const PerpBeam& beam, double y, double vx) {
  const double sat = local_saturation(beam, y);
  const double detune = 2.0 * (beam.detuning - species.wave_number() * vx) / species.gamma0();
  return species.gamma0() * sat / (1.0 + 2.0 * sat + detune * detune);
}

double areal_density(const CrystalState& crystal, double x, double y) {
  const double r2 = (x * x + y * y) / (crystal.radius * crystal.radius);
  return r2 < 1.0 ? crystal.sigma0 * std::sqrt(1.0 - r2) : 0.0;
}

double chord_density(const CrystalState& crystal, double y) {
  const double h2 = crystal.radius * crystal.radius - y * y;
  return h2 > 0.0 ? crystal.sigma0 * constants::pi * h2 / (2.0 * crystal.radius) : 0.0;
}

double ion_number(const CrystalState& crystal) {
  return crystal.sigma0 * (2.0 / 3.0) * constants::pi * crystal.radius * crystal.radius;
}

double velocity_pdf(const ThermalState& state, const CrystalState& crystal, double y, double vx) {
  const double s = (vx - crystal.omega_r * y) / state.u;
  return std::exp(-s * s) / (state.u * constants::sqrt_pi);
}

LorentzianMoments velocity_moments(const AtomicSpecies& species, const PerpBeam& beam,
                                   const CrystalState& crystal, const ThermalState& state,
                                   double y, const VelocityIntegrator& integrator) {
  // With v_x = omega_r y + u v the denominator of the scatter rate becomes
  // 1 + 2 S(y) + (c - b v)^2.
  const double scale = 2.0 / species.gamma0();
  const double k = species.wave_number();
  const double floor = 1.0 + 2.0 * local_saturation(beam, y);
  const double center = scale * (beam.detuning - k * crystal.omega_r * y);
  const double slope = scale * k * state.u;
  return integrator.moments(floor, center, slope);
}

double scatter_rate_density(const AtomicSpecies& species, const PerpBeam& beam,
                            const CrystalState& crystal, const ThermalState& state, double x,
                            double y, const VelocityIntegrator& integrator) {
  const double density = areal_density(crystal, x, y);
  if (density == 0.0) return 0.0;
  const double sat = local_saturation(beam, y);
  if (sat == 0.0) return 0.0;
  const auto m = velocity_moments(species, beam, crystal, state, y, integrator);
  return density * species.gamma0() * sat * m.zeroth;
}

}  // namespace rwcool
