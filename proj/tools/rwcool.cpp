// rwcool: equilibrium temperatures, torques and zero-torque curves for a
// laser-cooled rotating ion crystal.
//
//   rwcool limit        --config run.cfg [--format csv|json]
//   rwcool map          --config run.cfg --out map.csv [--format json|gnuplot]
//   rwcool reduced-map  --config run.cfg --out map.csv
//   rwcool zero-torque  --config run.cfg --out curve.csv
//   rwcool slope        --map map.csv [--level-mk 0.8]
//
// Exit status: 0 success, 1 configuration or usage error, 2 no converged
// equilibrium in limit mode.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwcool/balance.hpp"
#include "rwcool/config.hpp"
#include "rwcool/constants.hpp"
#include "rwcool/report.hpp"

namespace {

using namespace rwcool;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;

constexpr double kMHz = constants::two_pi * 1e6;
constexpr double kSlopeUnit = 1e6 * kMHz;  // m/(rad/s) -> um/MHz

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int workers = 0;
  std::string map_path;
  double level_mk = 0.0;
};

struct Loaded {
  ExperimentConfig config;
  std::string source_text;
};

Loaded load(const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("cannot open config file '" + opt.config_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Loaded out;
  out.source_text = buffer.str();
  std::istringstream text(out.source_text);
  out.config = parse_config(text, opt.config_path);
  if (opt.workers > 0) out.config.solver.workers = opt.workers;
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

json sidecar(const std::string& command, const Loaded& loaded, double seconds) {
  return {{"tool", "rwcool"},
          {"version", RWCOOL_VERSION},
          {"command", command},
          {"runtime_s", seconds},
          {"config", to_text(loaded.config)},
          {"config_source", loaded.source_text}};
}

void write_sidecar(const std::string& out_path, const json& meta) {
  auto out = open_output(out_path + ".json");
  out << meta.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_text(std::ostream& out, const nlohmann::ordered_json& report) {
  for (const auto& [key, value] : report.items()) {
    out << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
}

int cmd_limit(const Options& opt) {
  const auto loaded = load(opt);
  const auto& cfg = loaded.config;
  const auto species = cfg.species.build();
  const auto options = cfg.solver.options();

  auto balance = [&](double u) {
    return total_balance_full(species, cfg.beam, cfg.crystal, ThermalState{u}, cfg.par,
                              options.balance)
        .total_rate;
  };
  const auto eq = find_equilibrium(species, balance, options.root);
  const auto rates = total_balance_full(species, cfg.beam, cfg.crystal, ThermalState{eq.u_star},
                                        cfg.par, options.balance);
  const auto reduced = reduced_params_from_physical(species, cfg.beam, cfg.crystal);

  nlohmann::ordered_json report = {{"status", std::string(to_string(eq.status))},
                 {"T_perp_K", eq.temperature},
                 {"u_star_m_s", eq.u_star},
                 {"torque_Nm", rates.torque},
                 {"laser_rate_W", rates.laser_rate},
                 {"wall_rate_W", rates.wall_rate},
                 {"parallel_rate_W", rates.parallel_rate},
                 {"total_rate_W", rates.total_rate},
                 {"delta_d", reduced.delta_d},
                 {"delta_w", reduced.delta_w},
                 {"stable_crossings", static_cast<int>(std::count_if(
                                          eq.crossings.begin(), eq.crossings.end(),
                                          [](const auto& c) { return c.kind == Stability::stable; }))}};

  std::ostringstream text;
  if (opt.format == "json") {
    text << report.dump(2) << "\n";
  } else if (opt.format == "csv") {
    SweepGrid grid;
    grid.axis1 = {"detuning", "rad/s", {cfg.beam.detuning}};
    grid.axis2 = {"offset", "m", {cfg.beam.offset}};
    grid.has_torque = true;
    SweepCell cell;
    cell.status = eq.status;
    cell.temperature = eq.temperature;
    cell.u_star = eq.u_star;
    cell.torque = rates.torque;
    grid.cells.push_back(cell);
    write_csv(text, grid);
  } else {
    print_text(text, report);
  }

  if (opt.out_path.empty()) {
    std::cout << text.str();
  } else {
    open_output(opt.out_path) << text.str();
  }
  return eq.converged() ? kExitOk : kExitNotConverged;
}

void emit_grid(const Options& opt, const SweepGrid& grid, json meta) {
  {
    auto out = open_output(opt.out_path);
    write_csv(out, grid);
  }
  if (opt.format == "gnuplot") {
    auto out = open_output(opt.out_path + ".matrix");
    write_gnuplot(out, grid);
  }
  meta["axis1"] = {{"name", grid.axis1.name}, {"unit", grid.axis1.unit}};
  meta["axis2"] = {{"name", grid.axis2.name}, {"unit", grid.axis2.unit}};
  std::size_t converged = 0;
  for (const auto& c : grid.cells) converged += c.converged() ? 1 : 0;
  meta["cells"] = grid.cells.size();
  meta["converged_cells"] = converged;
  if (const auto m = trough_minimum(grid)) {
    meta["trough_minimum"] = {{"axis1", grid.axis1.values[m->i]},
                              {"axis2", grid.axis2.values[m->j]},
                              {"T_perp_K", m->temperature}};
  }
  if (opt.format == "json") meta["grid"] = to_json(grid);
  write_sidecar(opt.out_path, meta);
}

void require_out(const Options& opt) {
  if (opt.out_path.empty()) throw ConfigError("--out is required for this command");
}

int cmd_map(const Options& opt) {
  require_out(opt);
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load(opt);
  const auto& cfg = loaded.config;
  if (!cfg.map) throw ConfigError(opt.config_path + ": missing section [map]");
  const auto species = cfg.species.build();
  const auto grid =
      sweep_physical(species, cfg.beam, cfg.crystal, cfg.par, cfg.map->detuning.values(),
                     cfg.map->offset.values(), cfg.solver.options());
  auto meta = sidecar("map", loaded, seconds_since(start));
  if (cfg.crystal.omega_r > 0.0) {
    meta["predicted_slope_um_per_mhz"] =
        predicted_contour_slope(species, cfg.beam, cfg.crystal) * kSlopeUnit;
  }
  emit_grid(opt, grid, std::move(meta));
  return kExitOk;
}

int cmd_reduced_map(const Options& opt) {
  require_out(opt);
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load(opt);
  const auto& cfg = loaded.config;
  if (!cfg.reduced) throw ConfigError(opt.config_path + ": missing section [reduced_map]");
  const auto species = cfg.species.build();
  const auto grid = sweep_reduced(species, cfg.beam.s0, cfg.reduced->delta_d.values(),
                                  cfg.reduced->delta_w.values(), cfg.solver.options());
  emit_grid(opt, grid, sidecar("reduced-map", loaded, seconds_since(start)));
  return kExitOk;
}

int cmd_zero_torque(const Options& opt) {
  require_out(opt);
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load(opt);
  const auto& cfg = loaded.config;
  if (!cfg.zero_torque) throw ConfigError(opt.config_path + ": missing section [zero_torque]");
  const auto species = cfg.species.build();
  const auto curve =
      zero_torque_curve(species, cfg.beam, cfg.crystal, cfg.par, cfg.zero_torque->detuning.values(),
                        cfg.zero_torque->bracket, cfg.solver.options());
  {
    auto out = open_output(opt.out_path);
    write_csv(out, curve);
  }
  auto meta = sidecar("zero-torque", loaded, seconds_since(start));
  meta["axis1"] = {{"name", "detuning"}, {"unit", "rad/s"}};
  meta["axis2"] = {{"name", "offset"}, {"unit", "m"}};
  meta["points"] = curve.points.size();
  if (const auto p = coldest_point(curve)) {
    meta["coldest_point"] = {{"detuning_rad_s", p->detuning},
                             {"offset_m", p->offset},
                             {"T_perp_K", p->temperature}};
  }
  if (opt.format == "json") meta["curve"] = to_json(curve);
  write_sidecar(opt.out_path, meta);
  return kExitOk;
}

int cmd_slope(const Options& opt) {
  std::ifstream in(opt.map_path);
  if (!in) throw ConfigError("cannot open map file '" + opt.map_path + "'");
  const auto grid = read_csv_grid(in);

  std::optional<ExperimentConfig> cfg;
  std::ifstream meta_in(opt.map_path + ".json");
  if (meta_in) {
    const auto meta = json::parse(meta_in);
    std::istringstream text(meta.at("config").get<std::string>());
    cfg = parse_config(text, opt.map_path + ".json");
  }
  double level = opt.level_mk * 1e-3;
  if (!(level > 0.0)) {
    if (!cfg || !cfg->slope_level) {
      throw ConfigError("no contour level: pass --level-mk or add [slope] level_mk to the config");
    }
    level = *cfg->slope_level;
  }

  const auto fit = contour_slope(grid, level);
  nlohmann::ordered_json report = {{"level_K", level},
                 {"slope_um_per_mhz", fit.slope * kSlopeUnit},
                 {"residual_um", fit.residual * 1e6},
                 {"points", fit.points},
                 {"branches", fit.branches}};
  if (cfg && cfg->crystal.omega_r > 0.0) {
    report["predicted_slope_um_per_mhz"] =
        predicted_contour_slope(cfg->species.build(), cfg->beam, cfg->crystal) * kSlopeUnit;
  }
  if (opt.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    print_text(std::cout, report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium temperature and torque of a laser-cooled rotating ion crystal"};
  app.set_version_flag("--version", RWCOOL_VERSION);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "experiment configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", opt.out_path, "output file");
    sub->add_option("--workers", opt.workers, "worker threads (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", opt.format, "csv, json, gnuplot or text")
        ->check(CLI::IsMember({"csv", "json", "gnuplot", "text"}));
  };

  auto* limit = app.add_subcommand("limit", "equilibrium at a single beam setting");
  add_common(limit, true);
  auto* map = app.add_subcommand("map", "temperature and torque over detuning and offset");
  add_common(map, true);
  auto* reduced = app.add_subcommand("reduced-map", "temperature over the reduced parameters");
  add_common(reduced, true);
  auto* zero = app.add_subcommand("zero-torque", "zero-torque offsets versus detuning");
  add_common(zero, true);
  auto* slope = app.add_subcommand("slope", "contour slope of a temperature map");
  add_common(slope, false);
  slope->add_option("--map", opt.map_path, "map CSV written by 'map'")->required();
  slope->add_option("--level-mk", opt.level_mk, "contour level in mK");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  // Each command's default output format.
  const bool format_given = [&] {
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--format") > 0) return true;
    }
    return false;
  }();
  if (!format_given) opt.format = limit->parsed() || slope->parsed() ? "text" : "csv";

  try {
    if (limit->parsed()) return cmd_limit(opt);
    if (map->parsed()) return cmd_map(opt);
    if (reduced->parsed()) return cmd_reduced_map(opt);
    if (zero->parsed()) return cmd_zero_torque(opt);
    return cmd_slope(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
