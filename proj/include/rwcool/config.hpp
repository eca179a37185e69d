#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>

#include "rwcool/model.hpp"
#include "rwcool/species.hpp"
#include "rwcool/sweep.hpp"

namespace rwcool {

/// Malformed or inconsistent configuration text. The message carries the
/// source name and line number where one applies.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpeciesConfig {
  std::string preset = "be9";  // empty when raw values are given
  double mass = 0.0;           // kg, raw form only
  double wavelength = 0.0;     // m
  double gamma0 = 0.0;         // rad/s

  AtomicSpecies build() const;
};

struct GridAxisConfig {
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  std::vector<double> values() const { return linspace(min, max, points); }
};

/// Physical map axes, SI.
struct MapGridConfig {
  GridAxisConfig detuning;  // rad/s
  GridAxisConfig offset;    // m
};

/// Reduced map axes, in half linewidths.
struct ReducedGridConfig {
  GridAxisConfig delta_d;
  GridAxisConfig delta_w;
};

struct ZeroTorqueConfig {
  GridAxisConfig detuning;  // rad/s
  ZeroTorqueOptions bracket;
};

struct SolverConfig {
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  int hermite_order = VelocityIntegrator::default_order;
  double narrow_width = VelocityIntegrator::default_narrow_width;
  RootConfig root;
  int workers = 1;

  SweepOptions options() const;
};

/// Everything a run needs, in SI units. Text keys carry experiment units
/// (MHz, um, kHz); conversion happens once, in parse_config.
struct ExperimentConfig {
  SpeciesConfig species;
  CrystalState crystal;
  PerpBeam beam;
  ParBeam par;
  SolverConfig solver;
  std::optional<MapGridConfig> map;
  std::optional<ReducedGridConfig> reduced;
  std::optional<ZeroTorqueConfig> zero_torque;
  std::optional<double> slope_level;  // K
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& config);

}  // namespace rwcool
