#include "rwcool/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rwcool/constants.hpp"

namespace rwcool {

double temperature_of_u(const AtomicSpecies& species, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("temperature_of_u: u must be positive");
  return u * u * species.mass() / (2.0 * constants::boltzmann);
}

double u_of_temperature(const AtomicSpecies& species, double temperature) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("u_of_temperature: temperature must be positive");
  }
  return std::sqrt(2.0 * constants::boltzmann * temperature / species.mass());
}

void validate(const RootConfig& config) {
  if (!(config.u_min > 0.0) || !(config.u_max > config.u_min)) {
    throw std::invalid_argument("RootConfig: require 0 < u_min < u_max");
  }
  if (!(config.rate_abs_tol >= 0.0) || !(config.u_rel_tol > 0.0)) {
    throw std::invalid_argument("RootConfig: tolerances must be positive");
  }
  if (config.max_iterations < 1 || config.scan_points < 2) {
    throw std::invalid_argument("RootConfig: need max_iterations >= 1 and scan_points >= 2");
  }
  if (!(config.stability_epsilon > 0.0 && config.stability_epsilon < 1.0)) {
    throw std::invalid_argument("RootConfig: stability_epsilon must lie in (0, 1)");
  }
}

std::string_view to_string(EquilibriumStatus status) {
  switch (status) {
    case EquilibriumStatus::converged: return "converged";
    case EquilibriumStatus::no_root: return "no_root";
    case EquilibriumStatus::runaway_heating: return "runaway_heating";
    case EquilibriumStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

std::string_view to_string(Stability stability) {
  return stability == Stability::stable ? "stable" : "unstable";
}

namespace {

std::string describe(double u, double value) {
  std::ostringstream os;
  os << "balance function returned " << value << " at u = " << u << " m/s";
  return os.str();
}

}  // namespace

EvaluationError::EvaluationError(double u, double value)
    : std::runtime_error(describe(u, value)), u_(u) {}

EquilibriumResult find_equilibrium(const AtomicSpecies& species,
                                   const std::function<double(double)>& balance_fn,
                                   const RootConfig& config) {
  validate(config);
  EquilibriumResult result;

  auto eval = [&](double u) {
    const double value = balance_fn(u);
    ++result.evaluations;
    if (!std::isfinite(value)) throw EvaluationError(u, value);
    return value;
  };

  const int n = config.scan_points;
  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<double> rates(static_cast<std::size_t>(n));
  const double log_lo = std::log(config.u_min);
  const double log_step = (std::log(config.u_max) - log_lo) / (n - 1);
  double largest = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    grid[idx] = i == n - 1 ? config.u_max : std::exp(log_lo + i * log_step);
    rates[idx] = eval(grid[idx]);
    largest = std::max(largest, std::abs(rates[idx]));
  }
  const double rate_tol = config.rate_abs_tol > 0.0 ? config.rate_abs_tol : 1e-6 * largest;

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (rates[i] > 0.0 && rates[i + 1] <= 0.0) {
      result.crossings.push_back({grid[i], grid[i + 1], Stability::stable});
    } else if (rates[i] < 0.0 && rates[i + 1] >= 0.0) {
      result.crossings.push_back({grid[i], grid[i + 1], Stability::unstable});
    }
  }

  bool tolerance_missed = false;
  for (const auto& crossing : result.crossings) {
    if (crossing.kind != Stability::stable) continue;

    double lo = crossing.u_low;
    double hi = crossing.u_high;
    double mid = 0.5 * (lo + hi);
    double f_mid = eval(mid);
    for (int iter = 0; iter < config.max_iterations; ++iter) {
      const bool narrow = (hi - lo) <= config.u_rel_tol * lo;
      if (narrow && std::abs(f_mid) <= rate_tol) break;
      if (f_mid > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      mid = 0.5 * (lo + hi);
      f_mid = eval(mid);
    }
    if (std::abs(f_mid) > rate_tol) {
      tolerance_missed = true;
      continue;
    }

    const double eps = config.stability_epsilon;
    const bool stable = eval(mid * (1.0 + eps)) < 0.0 && eval(mid * (1.0 - eps)) > 0.0;
    if (!stable) continue;

    result.status = EquilibriumStatus::converged;
    result.u_star = mid;
    result.temperature = temperature_of_u(species, mid);
    result.stability = Stability::stable;
    result.residual_rate = f_mid;
    return result;
  }

  result.stability = Stability::unstable;
  if (tolerance_missed) {
    result.status = EquilibriumStatus::not_converged;
    result.u_star = config.u_max;
    result.residual_rate = rates.back();
  } else if (rates.back() > 0.0) {
    result.status = EquilibriumStatus::runaway_heating;
    result.u_star = config.u_max;
    result.residual_rate = rates.back();
  } else {
    result.status = EquilibriumStatus::no_root;
    result.u_star = config.u_min;
    result.residual_rate = rates.front();
  }
  result.temperature = temperature_of_u(species, result.u_star);
  return result;
}

}  // namespace rwcool
