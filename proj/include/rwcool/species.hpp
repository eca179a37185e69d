#pragma once

#include <string>
#include <string_view>

namespace rwcool {

/// Single-ion atomic parameters of the cooling transition.
///
/// The wave number is taken on resonance, k = 2*pi/lambda, for every beam
/// regardless of its detuning. Derived constants are computed once at
/// construction; instances are immutable.
class AtomicSpecies {
 public:
  /// Throws std::invalid_argument unless all three inputs are positive and finite.
  AtomicSpecies(double mass_kg, double wavelength_m, double gamma0_rad_s);

  /// 9Be+ on the 2s 2S1/2 -> 2p 2P3/2 line: 313 nm, gamma0/2pi = 18 MHz.
  static AtomicSpecies beryllium9();

  /// Looks up a built-in preset by name ("Be9", "9Be+", case-insensitive).
  /// Throws std::invalid_argument for an unknown name.
  static AtomicSpecies preset(std::string_view name);

  double mass() const { return mass_; }
  double wavelength() const { return wavelength_; }
  double gamma0() const { return gamma0_; }

  double wave_number() const { return k_; }
  /// (hbar k)^2 / 2m
  double recoil_energy() const { return recoil_energy_; }
  /// 5 hbar k / 6m, the recoil scale of the in-plane energy balance.
  double recoil_velocity() const { return v_rec_; }
  /// hbar gamma0 / 2 k_B
  double doppler_limit() const { return doppler_limit_; }

 private:
  double mass_;
  double wavelength_;
  double gamma0_;
  double k_;
  double recoil_energy_;
  double v_rec_;
  double doppler_limit_;
};

}  // namespace rwcool
