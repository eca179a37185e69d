#include "rwcool/config.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rwcool/constants.hpp"

namespace rwcool {

namespace {

constexpr double kMHz = constants::two_pi * 1e6;
constexpr double kKHz = constants::two_pi * 1e3;
constexpr double kMicron = 1e-6;
constexpr double kNanometre = 1e-9;
constexpr double kMilliKelvin = 1e-3;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"species", {"preset", "mass_amu", "wavelength_nm", "linewidth_mhz"}},
      {"crystal", {"radius_um", "density_m2", "rotation_khz"}},
      {"perp_beam", {"saturation", "waist_um", "offset_um", "detuning_mhz"}},
      {"par_beam", {"saturation"}},
      {"solver",
       {"rel_tol", "max_subdivisions", "hermite_order", "narrow_width", "u_min_m_s", "u_max_m_s",
        "rate_abs_tol_w", "u_rel_tol", "max_iterations", "scan_points", "stability_epsilon",
        "workers"}},
      {"map",
       {"detuning_min_mhz", "detuning_max_mhz", "detuning_points", "offset_min_um",
        "offset_max_um", "offset_points"}},
      {"reduced_map",
       {"delta_d_min", "delta_d_max", "delta_d_points", "delta_w_min", "delta_w_max",
        "delta_w_points"}},
      {"zero_torque",
       {"detuning_min_mhz", "detuning_max_mhz", "detuning_points", "offset_min_um",
        "offset_max_um", "scan_points", "bracket_um"}},
      {"slope", {"level_mk"}},
  };
  return keys;
}

struct Entry {
  std::string text;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Typed access to one parsed section, producing located error messages.
class Reader {
 public:
  Reader(const std::string& source, const std::string& name, const Section& entries)
      : source_(source), name_(name), entries_(entries) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double number(const std::string& key) const {
    const auto& e = entry(key);
    double value = 0.0;
    const char* begin = e.text.data();
    const char* end = begin + e.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      fail(e.line, key, "expected a finite number, got '" + e.text + "'");
    }
    return value;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const auto& e = entry(key);
    int value = 0;
    const char* begin = e.text.data();
    const char* end = begin + e.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      fail(e.line, key, "expected an integer, got '" + e.text + "'");
    }
    return value;
  }

  int integer(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string text(const std::string& key) const { return entry(key).text; }

  [[noreturn]] void fail(int line, const std::string& key, const std::string& what) const {
    std::ostringstream os;
    os << source_ << ":" << line << ": [" << name_ << "] " << key << ": " << what;
    throw ConfigError(os.str());
  }

  [[noreturn]] void fail_section(const std::string& what) const {
    throw ConfigError(source_ + ": [" + name_ + "]: " + what);
  }

  int line_of(const std::string& key) const { return has(key) ? entry(key).line : 0; }

 private:
  const Entry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail_section("missing required key '" + key + "'");
    return it->second;
  }

  const std::string& source_;
  std::string name_;
  const Section& entries_;
};

GridAxisConfig read_axis(const Reader& r, const std::string& stem, const std::string& suffix,
                         double scale) {
  GridAxisConfig axis;
  axis.min = r.number(stem + "_min" + suffix) * scale;
  axis.max = r.number(stem + "_max" + suffix) * scale;
  axis.points = r.integer(stem + "_points");
  if (axis.points < 1) {
    r.fail(r.line_of(stem + "_points"), stem + "_points", "must be at least 1");
  }
  if (axis.points > 1 && !(axis.min < axis.max)) {
    r.fail(r.line_of(stem + "_max" + suffix), stem + "_max" + suffix,
           "must exceed the minimum when more than one point is requested");
  }
  return axis;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

AtomicSpecies SpeciesConfig::build() const {
  if (!preset.empty()) return AtomicSpecies::preset(preset);
  return AtomicSpecies(mass, wavelength, gamma0);
}

SweepOptions SolverConfig::options() const {
  SweepOptions out;
  out.balance.velocity = VelocityIntegrator(hermite_order, narrow_width);
  out.balance.spatial = QuadratureSpec{rel_tol, 0.0, max_subdivisions};
  out.root = root;
  out.workers = workers;
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Section> sections;
  std::string current;
  std::string raw;
  int line_no = 0;
  auto fail_line = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(std::string_view(raw).substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail_line("unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_keys().count(current)) fail_line("unknown section [" + current + "]");
      if (sections.count(current)) fail_line("duplicate section [" + current + "]");
      sections[current];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_line("expected 'key = value'");
    if (current.empty()) fail_line("key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!known_keys().at(current).count(key)) {
      fail_line("unknown key '" + key + "' in [" + current + "]");
    }
    if (value.empty()) fail_line("empty value for '" + key + "'");
    auto& section = sections[current];
    if (section.count(key)) fail_line("duplicate key '" + key + "'");
    section[key] = Entry{value, line_no};
  }

  const Section empty;
  auto reader = [&](const std::string& name) {
    auto it = sections.find(name);
    return Reader(source, name, it == sections.end() ? empty : it->second);
  };

  ExperimentConfig cfg;
  try {
    {
      const auto r = reader("species");
      const bool raw_form = r.has("mass_amu") || r.has("wavelength_nm") || r.has("linewidth_mhz");
      if (raw_form) {
        if (r.has("preset")) r.fail_section("give either 'preset' or raw values, not both");
        cfg.species.preset.clear();
        cfg.species.mass = r.number("mass_amu") * constants::atomic_mass_unit;
        cfg.species.wavelength = r.number("wavelength_nm") * kNanometre;
        cfg.species.gamma0 = r.number("linewidth_mhz") * kMHz;
      } else if (r.has("preset")) {
        cfg.species.preset = r.text("preset");
      }
      (void)cfg.species.build();
    }
    {
      if (!sections.count("crystal")) throw ConfigError(source + ": missing section [crystal]");
      const auto r = reader("crystal");
      cfg.crystal.radius = r.number("radius_um") * kMicron;
      cfg.crystal.sigma0 = r.number("density_m2");
      cfg.crystal.omega_r = r.number("rotation_khz") * kKHz;
      validate(cfg.crystal);
    }
    {
      if (!sections.count("perp_beam")) {
        throw ConfigError(source + ": missing section [perp_beam]");
      }
      const auto r = reader("perp_beam");
      cfg.beam.s0 = r.number("saturation");
      cfg.beam.waist = r.number("waist_um") * kMicron;
      cfg.beam.offset = r.number("offset_um", 0.0) * kMicron;
      cfg.beam.detuning = r.number("detuning_mhz", 0.0) * kMHz;
      validate(cfg.beam);
    }
    {
      const auto r = reader("par_beam");
      cfg.par.s_par = r.number("saturation", 0.0);
      validate(cfg.par);
    }
    {
      const auto r = reader("solver");
      auto& s = cfg.solver;
      s.rel_tol = r.number("rel_tol", s.rel_tol);
      s.max_subdivisions = r.integer("max_subdivisions", s.max_subdivisions);
      s.hermite_order = r.integer("hermite_order", s.hermite_order);
      s.narrow_width = r.number("narrow_width", s.narrow_width);
      s.root.u_min = r.number("u_min_m_s", s.root.u_min);
      s.root.u_max = r.number("u_max_m_s", s.root.u_max);
      s.root.rate_abs_tol = r.number("rate_abs_tol_w", s.root.rate_abs_tol);
      s.root.u_rel_tol = r.number("u_rel_tol", s.root.u_rel_tol);
      s.root.max_iterations = r.integer("max_iterations", s.root.max_iterations);
      s.root.scan_points = r.integer("scan_points", s.root.scan_points);
      s.root.stability_epsilon = r.number("stability_epsilon", s.root.stability_epsilon);
      s.workers = r.integer("workers", s.workers);
      if (s.workers < 1) r.fail(r.line_of("workers"), "workers", "must be at least 1");
      validate(QuadratureSpec{s.rel_tol, 0.0, s.max_subdivisions});
      validate(s.root);
      (void)s.options();
    }
    if (sections.count("map")) {
      const auto r = reader("map");
      cfg.map = MapGridConfig{read_axis(r, "detuning", "_mhz", kMHz),
                              read_axis(r, "offset", "_um", kMicron)};
    }
    if (sections.count("reduced_map")) {
      const auto r = reader("reduced_map");
      cfg.reduced = ReducedGridConfig{read_axis(r, "delta_d", "", 1.0),
                                      read_axis(r, "delta_w", "", 1.0)};
      if (cfg.reduced->delta_w.min < 0.0) {
        r.fail(r.line_of("delta_w_min"), "delta_w_min", "must be >= 0");
      }
    }
    if (sections.count("zero_torque")) {
      const auto r = reader("zero_torque");
      ZeroTorqueConfig zt;
      zt.detuning = read_axis(r, "detuning", "_mhz", kMHz);
      zt.bracket.offset_lo = r.number("offset_min_um", zt.bracket.offset_lo / kMicron) * kMicron;
      zt.bracket.offset_hi = r.number("offset_max_um", zt.bracket.offset_hi / kMicron) * kMicron;
      zt.bracket.scan_points = r.integer("scan_points", zt.bracket.scan_points);
      zt.bracket.bracket_width =
          r.number("bracket_um", zt.bracket.bracket_width / kMicron) * kMicron;
      if (!(zt.bracket.offset_lo < zt.bracket.offset_hi) || zt.bracket.scan_points < 2 ||
          !(zt.bracket.bracket_width > 0.0)) {
        r.fail_section("need offset_min_um < offset_max_um, scan_points >= 2, bracket_um > 0");
      }
      cfg.zero_torque = zt;
    }
    if (sections.count("slope")) {
      const auto r = reader("slope");
      cfg.slope_level = r.number("level_mk") * kMilliKelvin;
      if (!(*cfg.slope_level > 0.0)) r.fail(r.line_of("level_mk"), "level_mk", "must be positive");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  auto put = [&](const char* key, double value) {
    os << key << " = " << format_double(value) << "\n";
  };
  auto put_int = [&](const char* key, int value) { os << key << " = " << value << "\n"; };

  os << "[species]\n";
  if (!c.species.preset.empty()) {
    os << "preset = " << c.species.preset << "\n";
  } else {
    put("mass_amu", c.species.mass / constants::atomic_mass_unit);
    put("wavelength_nm", c.species.wavelength / kNanometre);
    put("linewidth_mhz", c.species.gamma0 / kMHz);
  }

  os << "\n[crystal]\n";
  put("radius_um", c.crystal.radius / kMicron);
  put("density_m2", c.crystal.sigma0);
  put("rotation_khz", c.crystal.omega_r / kKHz);

  os << "\n[perp_beam]\n";
  put("saturation", c.beam.s0);
  put("waist_um", c.beam.waist / kMicron);
  put("offset_um", c.beam.offset / kMicron);
  put("detuning_mhz", c.beam.detuning / kMHz);

  os << "\n[par_beam]\n";
  put("saturation", c.par.s_par);

  const auto& s = c.solver;
  os << "\n[solver]\n";
  put("rel_tol", s.rel_tol);
  put_int("max_subdivisions", s.max_subdivisions);
  put_int("hermite_order", s.hermite_order);
  put("narrow_width", s.narrow_width);
  put("u_min_m_s", s.root.u_min);
  put("u_max_m_s", s.root.u_max);
  put("rate_abs_tol_w", s.root.rate_abs_tol);
  put("u_rel_tol", s.root.u_rel_tol);
  put_int("max_iterations", s.root.max_iterations);
  put_int("scan_points", s.root.scan_points);
  put("stability_epsilon", s.root.stability_epsilon);
  put_int("workers", s.workers);

  if (c.map) {
    os << "\n[map]\n";
    put("detuning_min_mhz", c.map->detuning.min / kMHz);
    put("detuning_max_mhz", c.map->detuning.max / kMHz);
    put_int("detuning_points", c.map->detuning.points);
    put("offset_min_um", c.map->offset.min / kMicron);
    put("offset_max_um", c.map->offset.max / kMicron);
    put_int("offset_points", c.map->offset.points);
  }
  if (c.reduced) {
    os << "\n[reduced_map]\n";
    put("delta_d_min", c.reduced->delta_d.min);
    put("delta_d_max", c.reduced->delta_d.max);
    put_int("delta_d_points", c.reduced->delta_d.points);
    put("delta_w_min", c.reduced->delta_w.min);
    put("delta_w_max", c.reduced->delta_w.max);
    put_int("delta_w_points", c.reduced->delta_w.points);
  }
  if (c.zero_torque) {
    const auto& z = *c.zero_torque;
    os << "\n[zero_torque]\n";
    put("detuning_min_mhz", z.detuning.min / kMHz);
    put("detuning_max_mhz", z.detuning.max / kMHz);
    put_int("detuning_points", z.detuning.points);
    put("offset_min_um", z.bracket.offset_lo / kMicron);
    put("offset_max_um", z.bracket.offset_hi / kMicron);
    put_int("scan_points", z.bracket.scan_points);
    put("bracket_um", z.bracket.bracket_width / kMicron);
  }
  if (c.slope_level) {
    os << "\n[slope]\n";
    put("level_mk", *c.slope_level / kMilliKelvin);
  }
  return os.str();
}

}  // namespace rwcool
