#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rwcool/species.hpp"

namespace rwcool {

/// T = u^2 m / 2 k_B. Throws std::invalid_argument for u <= 0.
double temperature_of_u(const AtomicSpecies& species, double u);

/// u = sqrt(2 k_B T / m). Throws std::invalid_argument for T <= 0.
double u_of_temperature(const AtomicSpecies& species, double temperature);

struct RootConfig {
  double u_min = 1e-3;  // m/s
  double u_max = 50.0;  // m/s
  /// J/s (or the balance function's own unit). Zero selects 1e-6 of the
  /// largest |rate| seen on the scan grid.
  double rate_abs_tol = 0.0;
  double u_rel_tol = 1e-6;
  int max_iterations = 200;
  int scan_points = 64;
  double stability_epsilon = 1e-3;
};

void validate(const RootConfig& config);

enum class EquilibriumStatus {
  converged,
  no_root,          // cooling everywhere on the bracket; u_min is an upper bound
  runaway_heating,  // heating at u_max and no stable root below
  not_converged,    // a stable bracket was found but the tolerances were not met
};

enum class Stability { stable, unstable };

std::string_view to_string(EquilibriumStatus status);
std::string_view to_string(Stability stability);

/// A sign change of the balance between two adjacent scan points. Stable
/// crossings go from heating (below) to cooling (above).
struct Crossing {
  double u_low = 0.0;
  double u_high = 0.0;
  Stability kind = Stability::stable;
};

struct EquilibriumResult {
  EquilibriumStatus status = EquilibriumStatus::no_root;
  double u_star = 0.0;
  double temperature = 0.0;
  Stability stability = Stability::unstable;
  double residual_rate = 0.0;
  int evaluations = 0;
  std::vector<Crossing> crossings;

  bool converged() const { return status == EquilibriumStatus::converged; }
};

/// A balance function returned NaN or infinity.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(double u, double value);
  double u() const { return u_; }

 private:
  double u_;
};

/// Smallest stable root of balance_fn on [u_min, u_max]: scans a log grid for
/// sign changes, bisects each heating-to-cooling crossing in ascending order,
/// and accepts the first one that passes the +-epsilon stability check.
EquilibriumResult find_equilibrium(const AtomicSpecies& species,
                                   const std::function<double(double)>& balance_fn,
                                   const RootConfig& config = {});

}  // namespace rwcool
