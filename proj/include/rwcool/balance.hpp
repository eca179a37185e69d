#pragma once

#include "rwcool/model.hpp"
#include "rwcool/quadrature.hpp"
#include "rwcool/species.hpp"

namespace rwcool {

/// Dimensionless parameters of the small-beam balance, all in units of the
/// half linewidth gamma0/2.
struct ReducedParams {
  double s0 = 0.0;
  double kv_over_hw = 0.0;  // k v_rec / (gamma0/2)
  double delta_d = 0.0;     // (detuning - k omega_r d) / (gamma0/2)
  double delta_w = 0.0;     // k omega_r w_y / (gamma0/2)
};

/// Energy-exchange rates (J/s) and laser torque (N m, numerically equal to J)
/// at one thermal velocity.
struct BalanceResult {
  double laser_rate = 0.0;
  double wall_rate = 0.0;
  double parallel_rate = 0.0;
  double total_rate = 0.0;  // laser + wall + parallel
  double torque = 0.0;
};

struct BalanceOptions {
  VelocityIntegrator velocity{};
  QuadratureSpec spatial{1e-8, 0.0, 2000};
};

enum class DensityCorrection { none, rescaled_beam };

/// Laser torque by nested adaptive integration of hbar k y Sc(x, y) over the
/// disk. Positive when the laser tends to spin the crystal up.
double laser_torque(const AtomicSpecies& species, const PerpBeam& beam,
                    const CrystalState& crystal, const ThermalState& state,
                    const BalanceOptions& options = {});

/// Rate of in-plane kinetic energy change from the perpendicular beam alone,
/// with (hbar k v_x + 5R/3) per scatter, integrated over the disk.
double laser_energy_rate(const AtomicSpecies& species, const PerpBeam& beam,
                         const CrystalState& crystal, const ThermalState& state,
                         const BalanceOptions& options = {});

/// Full laser + rotating wall + parallel-beam balance. The x integral of the
/// density is done in closed form; y is integrated adaptively and the
/// velocity average uses the options' VelocityIntegrator. All components share
/// one set of spatial nodes.
BalanceResult total_balance_full(const AtomicSpecies& species, const PerpBeam& beam,
                                 const CrystalState& crystal, const ThermalState& state,
                                 const ParBeam& par, const BalanceOptions& options = {});

/// Small-beam balance in dimensionless form, up to a positive constant factor:
///   int d(delta) int dv e^{-2 delta^2} e^{-v^2} (v + 1/rho)
///     / [1 + 2 S0 e^{-2 delta^2} + (Dd - Dw delta - kv rho v)^2],
/// with rho = u / v_rec. Independent of crystal radius and density.
double total_balance_reduced(const ReducedParams& params, double u_over_vrec,
                             const BalanceOptions& options = {});

/// Folds the lowest-order radial density falloff into an equivalent beam:
/// w'^2 = w^2 / (1 + w^2/4Rc^2), d' = d / (1 + w^2/4Rc^2).
PerpBeam rescale_beam(const PerpBeam& beam, const CrystalState& crystal);

/// Constant in-plane recoil heating from a beam along B, uniform over the
/// crystal and detuned by -gamma0/2:
/// gamma0 S/(1+S) * R/3 * N.
double parallel_recoil_rate(const AtomicSpecies& species, const ParBeam& par,
                            const CrystalState& crystal);

ReducedParams reduced_params_from_physical(const AtomicSpecies& species, const PerpBeam& beam,
                                           const CrystalState& crystal,
                                           DensityCorrection correction = DensityCorrection::none);

/// Offset change per unit detuning along lines of constant Delta_d, including
/// the density correction: (1 + w^2/4Rc^2) / (k omega_r), in m per rad/s.
double predicted_contour_slope(const AtomicSpecies& species, const PerpBeam& beam,
                               const CrystalState& crystal);

}  // namespace rwcool
