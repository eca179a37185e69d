#include "rwcool/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace rwcool {

std::vector<double> linspace(double first, double last, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = first;
    return out;
  }
  const double step = (last - first) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = first + i * step;
  out.back() = last;
  return out;
}

std::optional<double> SweepGrid::temperature(std::size_t i, std::size_t j) const {
  const auto& cell = at(i, j);
  if (!cell.converged()) return std::nullopt;
  return cell.temperature;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  if (count == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(std::min(count, n));
    for (std::size_t t = 0; t < std::min(count, n); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw std::invalid_argument(std::string(name) + " axis is empty");
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    if (!(axis[i] < axis[i + 1])) {
      throw std::invalid_argument(std::string(name) + " axis must be strictly increasing");
    }
  }
}

int count_stable(const EquilibriumResult& r) {
  return static_cast<int>(std::count_if(r.crossings.begin(), r.crossings.end(), [](const auto& c) {
    return c.kind == Stability::stable;
  }));
}

}  // namespace

SweepCell solve_physical_cell(const AtomicSpecies& species, const PerpBeam& beam,
                              const CrystalState& crystal, const ParBeam& par,
                              const SweepOptions& options) {
  SweepCell cell;
  try {
    auto balance = [&](double u) {
      return total_balance_full(species, beam, crystal, ThermalState{u}, par, options.balance)
          .total_rate;
    };
    const auto eq = find_equilibrium(species, balance, options.root);
    cell.status = eq.status;
    cell.u_star = eq.u_star;
    cell.temperature = eq.temperature;
    cell.stable_crossings = count_stable(eq);
    if (eq.converged()) {
      cell.torque =
          total_balance_full(species, beam, crystal, ThermalState{eq.u_star}, par, options.balance)
              .torque;
    }
  } catch (const std::exception& e) {
    cell.status = EquilibriumStatus::not_converged;
    cell.error = e.what();
  }
  return cell;
}

SweepCell solve_reduced_cell(const AtomicSpecies& species, const ReducedParams& params,
                             const SweepOptions& options) {
  SweepCell cell;
  try {
    const double v_rec = species.recoil_velocity();
    auto balance = [&](double u) {
      return total_balance_reduced(params, u / v_rec, options.balance);
    };
    const auto eq = find_equilibrium(species, balance, options.root);
    cell.status = eq.status;
    cell.u_star = eq.u_star;
    cell.temperature = eq.temperature;
    cell.stable_crossings = count_stable(eq);
  } catch (const std::exception& e) {
    cell.status = EquilibriumStatus::not_converged;
    cell.error = e.what();
  }
  return cell;
}

SweepGrid sweep_physical(const AtomicSpecies& species, const PerpBeam& beam_template,
                         const CrystalState& crystal, const ParBeam& par,
                         const std::vector<double>& detuning_axis,
                         const std::vector<double>& offset_axis, const SweepOptions& options) {
  check_axis(detuning_axis, "detuning");
  check_axis(offset_axis, "offset");
  validate(beam_template);
  validate(crystal);
  validate(par);

  SweepGrid grid;
  grid.axis1 = {"detuning", "rad/s", detuning_axis};
  grid.axis2 = {"offset", "m", offset_axis};
  grid.has_torque = true;
  grid.cells.resize(detuning_axis.size() * offset_axis.size());

  parallel_for(grid.cells.size(), options.workers, [&](std::size_t idx) {
    PerpBeam beam = beam_template;
    beam.detuning = detuning_axis[idx / offset_axis.size()];
    beam.offset = offset_axis[idx % offset_axis.size()];
    grid.cells[idx] = solve_physical_cell(species, beam, crystal, par, options);
  });
  return grid;
}

SweepGrid sweep_reduced(const AtomicSpecies& species, double s0,
                        const std::vector<double>& delta_d_axis,
                        const std::vector<double>& delta_w_axis, const SweepOptions& options) {
  check_axis(delta_d_axis, "delta_d");
  check_axis(delta_w_axis, "delta_w");
  if (!(s0 >= 0.0)) throw std::invalid_argument("sweep_reduced: s0 must be >= 0");

  SweepGrid grid;
  grid.axis1 = {"delta_d", "half linewidths", delta_d_axis};
  grid.axis2 = {"delta_w", "half linewidths", delta_w_axis};
  grid.has_torque = false;
  grid.cells.resize(delta_d_axis.size() * delta_w_axis.size());

  const double kv_over_hw =
      species.wave_number() * species.recoil_velocity() / (0.5 * species.gamma0());
  parallel_for(grid.cells.size(), options.workers, [&](std::size_t idx) {
    ReducedParams p;
    p.s0 = s0;
    p.kv_over_hw = kv_over_hw;
    p.delta_d = delta_d_axis[idx / delta_w_axis.size()];
    p.delta_w = delta_w_axis[idx % delta_w_axis.size()];
    grid.cells[idx] = solve_reduced_cell(species, p, options);
  });
  return grid;
}

std::optional<GridMinimum> trough_minimum(const SweepGrid& grid) {
  std::optional<GridMinimum> best;
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto t = grid.temperature(i, j);
      if (t && (!best || *t < best->temperature)) best = GridMinimum{i, j, *t};
    }
  }
  return best;
}

ZeroTorqueCurve zero_torque_curve(const AtomicSpecies& species, const PerpBeam& beam_template,
                                  const CrystalState& crystal, const ParBeam& par,
                                  const std::vector<double>& detuning_axis,
                                  const ZeroTorqueOptions& zt, const SweepOptions& options) {
  check_axis(detuning_axis, "detuning");
  if (!(zt.offset_lo < zt.offset_hi) || zt.scan_points < 2 || !(zt.bracket_width > 0.0)) {
    throw std::invalid_argument("zero_torque_curve: invalid offset bracket options");
  }

  std::vector<std::optional<ZeroTorquePoint>> found(detuning_axis.size());
  parallel_for(detuning_axis.size(), options.workers, [&](std::size_t k) {
    PerpBeam beam = beam_template;
    beam.detuning = detuning_axis[k];
    auto solve_at = [&](double offset) {
      beam.offset = offset;
      return solve_physical_cell(species, beam, crystal, par, options);
    };
    auto torque_at = [&](double offset) {
      const auto cell = solve_at(offset);
      return cell.converged() ? cell.torque : std::numeric_limits<double>::quiet_NaN();
    };

    const auto offsets = linspace(zt.offset_lo, zt.offset_hi, zt.scan_points);
    double lo = 0.0;
    double hi = 0.0;
    double t_lo = torque_at(offsets[0]);
    bool bracketed = false;
    for (std::size_t i = 1; i < offsets.size(); ++i) {
      const double t_hi = torque_at(offsets[i]);
      if (std::isfinite(t_lo) && std::isfinite(t_hi) && (t_lo < 0.0) != (t_hi < 0.0)) {
        lo = offsets[i - 1];
        hi = offsets[i];
        bracketed = true;
        break;
      }
      t_lo = t_hi;
    }
    if (!bracketed) return;

    while (hi - lo > zt.bracket_width) {
      const double mid = 0.5 * (lo + hi);
      const double t_mid = torque_at(mid);
      if (!std::isfinite(t_mid)) return;
      if ((t_mid < 0.0) == (t_lo < 0.0)) {
        lo = mid;
        t_lo = t_mid;
      } else {
        hi = mid;
      }
    }
    const double mid = 0.5 * (lo + hi);
    const auto cell = solve_at(mid);
    if (!cell.converged()) return;
    found[k] = ZeroTorquePoint{detuning_axis[k], mid, cell.temperature, cell.torque};
  });

  ZeroTorqueCurve curve;
  curve.bracket_width = zt.bracket_width;
  for (const auto& p : found) {
    if (p) curve.points.push_back(*p);
  }
  return curve;
}

std::optional<ZeroTorquePoint> coldest_point(const ZeroTorqueCurve& curve) {
  if (curve.points.empty()) return std::nullopt;
  return *std::min_element(curve.points.begin(), curve.points.end(),
                           [](const auto& a, const auto& b) {
                             return a.temperature < b.temperature;
                           });
}

}  // namespace rwcool
