#pragma once

#include "rwcool/quadrature.hpp"
#include "rwcool/species.hpp"

namespace rwcool {

/// Perpendicular cooling beam, directed along +x with a Gaussian profile in y:
/// I(y) = I0 exp[-2 (y - offset)^2 / waist^2].
struct PerpBeam {
  double s0 = 0.0;        // peak saturation parameter
  double waist = 0.0;     // m
  double offset = 0.0;    // m, > 0 on the side receding from the laser
  double detuning = 0.0;  // rad/s, recoil-corrected, negative is red
};

/// Beam along the magnetic field, tuned half a linewidth red of resonance.
struct ParBeam {
  double s_par = 0.0;
};

/// Single-plane crystal: areal density Sigma0 sqrt(1 - r^2/Rc^2) rotating
/// rigidly at omega_r (> 0 by convention).
struct CrystalState {
  double radius = 0.0;   // m
  double sigma0 = 0.0;   // 1/m^2
  double omega_r = 0.0;  // rad/s
};

/// Thermal velocity scale u = sqrt(2 k_B T / m) of the in-plane motion.
struct ThermalState {
  double u = 0.0;  // m/s
};

// Each throws std::invalid_argument on a violated invariant.
void validate(const PerpBeam& beam);
void validate(const ParBeam& beam);
void validate(const CrystalState& crystal);
void validate(const ThermalState& state);

/// Local saturation S(y) = S0 exp[-2 (y - d)^2 / w^2].
double local_saturation(const PerpBeam& beam, double y);

/// Photon scatter rate (1/s) of one ion at height y moving with v_x.
double scatter_rate(const AtomicSpecies& species, const PerpBeam& beam, double y, double vx);

/// Areal density (1/m^2); zero outside the disk.
double areal_density(const CrystalState& crystal, double x, double y);

/// Column density integrated along x at height y:
/// int sigma dx = Sigma0 pi (Rc^2 - y^2) / (2 Rc), zero for |y| >= Rc.
double chord_density(const CrystalState& crystal, double y);

/// Number of ions, N = (2/3) pi Rc^2 Sigma0.
double ion_number(const CrystalState& crystal);

/// Maxwell-Boltzmann distribution of v_x about the rigid-rotation velocity
/// omega_r y, in s/m.
double velocity_pdf(const ThermalState& state, const CrystalState& crystal, double y, double vx);

/// Thermally averaged Lorentzian at height y: (1/sqrt(pi)) int e^{-v^2} {1, v} / D(v) dv
/// where D is the scatter-rate denominator after v_x = omega_r y + u v.
LorentzianMoments velocity_moments(const AtomicSpecies& species, const PerpBeam& beam,
                                   const CrystalState& crystal, const ThermalState& state,
                                   double y, const VelocityIntegrator& integrator);

/// Scatter rate per unit area at (x, y), 1/(s m^2), averaged over v_x.
double scatter_rate_density(const AtomicSpecies& species, const PerpBeam& beam,
                            const CrystalState& crystal, const ThermalState& state, double x,
                            double y, const VelocityIntegrator& integrator = VelocityIntegrator{});

}  // namespace rwcool
