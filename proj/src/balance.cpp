#include "rwcool/balance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rwcool/constants.hpp"

namespace rwcool {

namespace {

// Beyond this many waists the Gaussian factor is below e^{-72}.
constexpr double kBeamReach = 6.0;
constexpr double kReducedReach = 6.0;
constexpr double kAutoAbsTolFraction = 1e-12;

void validate_all(const PerpBeam& beam, const CrystalState& crystal, const ThermalState& state) {
  validate(beam);
  validate(crystal);
  validate(state);
}

std::vector<double> sorted_breakpoints(double lo, double hi, std::initializer_list<double> extra) {
  std::vector<double> points{lo, hi};
  for (double p : extra) {
    if (std::isfinite(p) && p > lo && p < hi) points.push_back(p);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

// Largest possible total scatter rate of the crystal, 1/s.
double peak_scatter_rate(const PerpBeam& beam, const CrystalState& crystal,
                         const AtomicSpecies& species) {
  return ion_number(crystal) * species.gamma0() * beam.s0 / (1.0 + 2.0 * beam.s0);
}

QuadratureSpec with_auto_abs_tol(QuadratureSpec spec, double scale) {
  if (spec.abs_tol <= 0.0) spec.abs_tol = kAutoAbsTolFraction * scale;
  return spec;
}

}  // namespace

double laser_torque(const AtomicSpecies& species, const PerpBeam& beam,
                    const CrystalState& crystal, const ThermalState& state,
                    const BalanceOptions& options) {
  validate_all(beam, crystal, state);
  const double hbar_k = constants::hbar * species.wave_number();
  const auto spec = with_auto_abs_tol(
      options.spatial, hbar_k * crystal.radius * peak_scatter_rate(beam, crystal, species));
  auto integrand = [&](double x, double y) {
    return hbar_k * y *
           scatter_rate_density(species, beam, crystal, state, x, y, options.velocity);
  };
  return integrate_disk_xy(integrand, crystal.radius, spec).value;
}

double laser_energy_rate(const AtomicSpecies& species, const PerpBeam& beam,
                         const CrystalState& crystal, const ThermalState& state,
                         const BalanceOptions& options) {
  validate_all(beam, crystal, state);
  const double hbar_k = constants::hbar * species.wave_number();
  const double recoil_share = 5.0 * species.recoil_energy() / 3.0;
  const double energy_scale =
      hbar_k * (crystal.omega_r * crystal.radius + state.u) + recoil_share;
  const auto spec = with_auto_abs_tol(
      options.spatial, energy_scale * peak_scatter_rate(beam, crystal, species));

  auto integrand = [&](double x, double y) {
    const double density = areal_density(crystal, x, y);
    const double sat = local_saturation(beam, y);
    if (density == 0.0 || sat == 0.0) return 0.0;
    const auto m = velocity_moments(species, beam, crystal, state, y, options.velocity);
    // <hbar k v_x> with v_x = omega_r y + u v.
    const double per_scatter =
        hbar_k * (crystal.omega_r * y * m.zeroth + state.u * m.first) + recoil_share * m.zeroth;
    return density * species.gamma0() * sat * per_scatter;
  };
  return integrate_disk_xy(integrand, crystal.radius, spec).value;
}

BalanceResult total_balance_full(const AtomicSpecies& species, const PerpBeam& beam,
                                 const CrystalState& crystal, const ThermalState& state,
                                 const ParBeam& par, const BalanceOptions& options) {
  validate_all(beam, crystal, state);
  validate(par);

  BalanceResult out;
  out.parallel_rate = parallel_recoil_rate(species, par, crystal);

  if (beam.s0 > 0.0) {
    const double hbar_k = constants::hbar * species.wave_number();
    const double recoil_share = 5.0 * species.recoil_energy() / 3.0;
    const double omega_r = crystal.omega_r;
    const double u = state.u;
    const double resonance =
        omega_r > 0.0 ? beam.detuning / (species.wave_number() * omega_r) : beam.offset;
    const double w = beam.waist;
    const double d = beam.offset;
    const auto points = sorted_breakpoints(
        -crystal.radius, crystal.radius,
        {d - kBeamReach * w, d - 2.0 * w, d, d + 2.0 * w, d + kBeamReach * w, resonance});

    // Components: laser energy rate, wall work rate, torque.
    auto integrand = [&](double y) -> std::array<double, 3> {
      const double sat = local_saturation(beam, y);
      const double column = chord_density(crystal, y);
      if (sat == 0.0 || column == 0.0) return {0.0, 0.0, 0.0};
      const auto m = velocity_moments(species, beam, crystal, state, y, options.velocity);
      const double scatter = species.gamma0() * sat * column * m.zeroth;
      const double first = species.gamma0() * sat * column * m.first;
      const double laser = hbar_k * (omega_r * y * scatter + u * first) + recoil_share * scatter;
      const double wall = -omega_r * hbar_k * y * scatter;
      const double torque = hbar_k * y * scatter;
      return {laser, wall, torque};
    };
    const auto res = integrate_adaptive<3>(integrand, points, options.spatial);
    out.laser_rate = res.value[0];
    out.wall_rate = res.value[1];
    out.torque = res.value[2];
  }
  out.total_rate = out.laser_rate + out.wall_rate + out.parallel_rate;
  return out;
}

double total_balance_reduced(const ReducedParams& params, double u_over_vrec,
                             const BalanceOptions& options) {
  if (!(u_over_vrec > 0.0)) {
    throw std::invalid_argument("total_balance_reduced: u/v_rec must be positive");
  }
  if (!(params.s0 >= 0.0) || !(params.delta_w >= 0.0)) {
    throw std::invalid_argument("total_balance_reduced: require s0 >= 0 and delta_w >= 0");
  }
  const double rho = u_over_vrec;
  const double slope = params.kv_over_hw * rho;
  const double resonance =
      params.delta_w > 0.0 ? params.delta_d / params.delta_w : 0.0;
  const auto points =
      sorted_breakpoints(-kReducedReach, kReducedReach, {-1.0, 0.0, 1.0, resonance});

  auto integrand = [&](double delta) -> std::array<double, 1> {
    const double profile = std::exp(-2.0 * delta * delta);
    const double floor = 1.0 + 2.0 * params.s0 * profile;
    const double center = params.delta_d - params.delta_w * delta;
    const auto m = options.velocity.moments(floor, center, slope);
    return {profile * constants::sqrt_pi * (m.first + m.zeroth / rho)};
  };
  return integrate_adaptive<1>(integrand, points, options.spatial).value[0];
}

PerpBeam rescale_beam(const PerpBeam& beam, const CrystalState& crystal) {
  validate(beam);
  validate(crystal);
  const double ratio = beam.waist / (2.0 * crystal.radius);
  const double factor = 1.0 / (1.0 + ratio * ratio);
  PerpBeam out = beam;
  out.waist = beam.waist * std::sqrt(factor);
  out.offset = beam.offset * factor;
  return out;
}

double parallel_recoil_rate(const AtomicSpecies& species, const ParBeam& par,
                            const CrystalState& crystal) {
  validate(par);
  validate(crystal);
  return species.gamma0() * par.s_par / (1.0 + par.s_par) * species.recoil_energy() / 3.0 *
         ion_number(crystal);
}

ReducedParams reduced_params_from_physical(const AtomicSpecies& species, const PerpBeam& beam,
                                           const CrystalState& crystal,
                                           DensityCorrection correction) {
  validate(beam);
  validate(crystal);
  const PerpBeam effective =
      correction == DensityCorrection::rescaled_beam ? rescale_beam(beam, crystal) : beam;
  const double half_width = 0.5 * species.gamma0();
  const double k = species.wave_number();
  ReducedParams p;
  p.s0 = beam.s0;
  p.kv_over_hw = k * species.recoil_velocity() / half_width;
  p.delta_d = (beam.detuning - k * crystal.omega_r * effective.offset) / half_width;
  p.delta_w = k * crystal.omega_r * effective.waist / half_width;
  return p;
}

double predicted_contour_slope(const AtomicSpecies& species, const PerpBeam& beam,
                               const CrystalState& crystal) {
  validate(beam);
  validate(crystal);
  if (!(crystal.omega_r > 0.0)) {
    throw std::invalid_argument("predicted_contour_slope: needs omega_r > 0");
  }
  const double ratio = beam.waist / (2.0 * crystal.radius);
  return (1.0 + ratio * ratio) / (species.wave_number() * crystal.omega_r);
}

}  // namespace rwcool
