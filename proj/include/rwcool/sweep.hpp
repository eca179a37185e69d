#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwcool/balance.hpp"
#include "rwcool/equilibrium.hpp"

namespace rwcool {

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// n evenly spaced values from first to last inclusive.
std::vector<double> linspace(double first, double last, int n);

struct SweepCell {
  EquilibriumStatus status = EquilibriumStatus::no_root;
  double temperature = 0.0;  // K, meaningful when converged
  double u_star = 0.0;
  double torque = 0.0;       // N m at u_star, physical sweeps only
  int stable_crossings = 0;  // > 1 flags bistability
  std::string error;         // non-empty when the cell threw

  bool converged() const { return error.empty() && status == EquilibriumStatus::converged; }
};

/// Equilibrium results over axis1 x axis2, stored row-major with axis2 fastest.
struct SweepGrid {
  Axis axis1;
  Axis axis2;
  std::vector<SweepCell> cells;
  bool has_torque = false;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t rows() const { return axis1.values.size(); }
  std::size_t cols() const { return axis2.values.size(); }
  const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * cols() + j]; }
  SweepCell& at(std::size_t i, std::size_t j) { return cells[i * cols() + j]; }
  std::optional<double> temperature(std::size_t i, std::size_t j) const;
};

struct SweepOptions {
  BalanceOptions balance{};
  RootConfig root{};
  int workers = 1;
};

/// Runs body(i) for i in [0, n) on `workers` threads. Each index is visited
/// exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

/// Equilibrium of the full balance at one physical configuration, plus the
/// laser torque at the equilibrium thermal velocity.
SweepCell solve_physical_cell(const AtomicSpecies& species, const PerpBeam& beam,
                              const CrystalState& crystal, const ParBeam& par,
                              const SweepOptions& options);

/// Equilibrium of the reduced balance, mapped back to a temperature.
SweepCell solve_reduced_cell(const AtomicSpecies& species, const ReducedParams& params,
                             const SweepOptions& options);

/// Temperature and torque over (detuning, offset). Per-cell failures are
/// recorded in the grid; the sweep never aborts on one cell.
SweepGrid sweep_physical(const AtomicSpecies& species, const PerpBeam& beam_template,
                         const CrystalState& crystal, const ParBeam& par,
                         const std::vector<double>& detuning_axis,
                         const std::vector<double>& offset_axis, const SweepOptions& options = {});

/// Temperature over (Delta_d, Delta_w) from the reduced balance at fixed S0.
SweepGrid sweep_reduced(const AtomicSpecies& species, double s0,
                        const std::vector<double>& delta_d_axis,
                        const std::vector<double>& delta_w_axis,
                        const SweepOptions& options = {});

struct GridMinimum {
  std::size_t i = 0;
  std::size_t j = 0;
  double temperature = 0.0;
};

/// Coldest converged cell; nullopt if none converged.
std::optional<GridMinimum> trough_minimum(const SweepGrid& grid);

struct ZeroTorquePoint {
  double detuning = 0.0;     // rad/s
  double offset = 0.0;       // m, midpoint of the final bracket
  double temperature = 0.0;  // K at the midpoint
  double torque = 0.0;       // N m at the midpoint
};

struct ZeroTorqueCurve {
  std::vector<ZeroTorquePoint> points;
  double bracket_width = 0.0;  // m
};

struct ZeroTorqueOptions {
  double offset_lo = -20e-6;  // m
  double offset_hi = 60e-6;   // m
  int scan_points = 17;
  double bracket_width = 0.1e-6;
};

/// For each detuning, locates the first sign change of the equilibrium
/// torque in offset and bisects it down to bracket_width. Detunings with no
/// sign change are omitted; an empty curve is a valid result.
ZeroTorqueCurve zero_torque_curve(const AtomicSpecies& species, const PerpBeam& beam_template,
                                  const CrystalState& crystal, const ParBeam& par,
                                  const std::vector<double>& detuning_axis,
                                  const ZeroTorqueOptions& zt_options = {},
                                  const SweepOptions& options = {});

/// Coldest point of a zero-torque curve; nullopt for an empty curve.
std::optional<ZeroTorquePoint> coldest_point(const ZeroTorqueCurve& curve);

struct ContourPoint {
  double a1 = 0.0;  // axis1 coordinate
  double a2 = 0.0;  // axis2 coordinate
};

/// Level set of the temperature field as connected polylines. Cells with a
/// non-converged corner are skipped.
std::vector<std::vector<ContourPoint>> extract_contours(const SweepGrid& grid, double level);

struct ContourFit {
  double slope = 0.0;     // d(axis2)/d(axis1)
  double residual = 0.0;  // RMS axis2 deviation from the fitted lines
  std::size_t points = 0;
  std::size_t branches = 0;
};

class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Common slope of all branches of a level set: least squares of axis2 on
/// axis1 with a separate intercept per branch. Throws ContourError when the
/// level set is empty or too short to fit.
ContourFit contour_slope(const SweepGrid& grid, double level);

}  // namespace rwcool
