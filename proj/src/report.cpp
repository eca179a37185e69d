#include "rwcool/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rwcool {

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const SweepGrid& grid) {
  out << kCsvHeader << "\n";
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto& cell = grid.at(i, j);
      out << format_number(grid.axis1.values[i]) << ',' << format_number(grid.axis2.values[j])
          << ',';
      if (cell.converged()) {
        out << format_number(cell.temperature);
        out << ',';
        if (grid.has_torque) out << format_number(cell.torque);
      } else {
        out << ',';
      }
      out << ',' << to_string(cell.status) << "\n";
    }
  }
}

void write_csv(std::ostream& out, const ZeroTorqueCurve& curve) {
  out << kCsvHeader << "\n";
  for (const auto& p : curve.points) {
    out << format_number(p.detuning) << ',' << format_number(p.offset) << ','
        << format_number(p.temperature) << ',' << format_number(p.torque) << ','
        << to_string(EquilibriumStatus::converged) << "\n";
  }
}

void write_gnuplot(std::ostream& out, const SweepGrid& grid) {
  out << format_number(static_cast<double>(grid.cols()));
  for (double v : grid.axis2.values) out << ' ' << format_number(v);
  out << "\n";
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    out << format_number(grid.axis1.values[i]);
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto t = grid.temperature(i, j);
      out << ' ' << format_number(t ? *t : std::nan(""));
    }
    out << "\n";
  }
}

nlohmann::json to_json(const SweepGrid& grid) {
  using nlohmann::json;
  json temps = json::array();
  json torques = json::array();
  json status = json::array();
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    json t_row = json::array();
    json q_row = json::array();
    json s_row = json::array();
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto& cell = grid.at(i, j);
      t_row.push_back(cell.converged() ? json(cell.temperature) : json(nullptr));
      q_row.push_back(cell.converged() && grid.has_torque ? json(cell.torque) : json(nullptr));
      s_row.push_back(std::string(to_string(cell.status)));
    }
    temps.push_back(std::move(t_row));
    torques.push_back(std::move(q_row));
    status.push_back(std::move(s_row));
  }
  json out = {
      {"axis1", {{"name", grid.axis1.name}, {"unit", grid.axis1.unit}, {"values", grid.axis1.values}}},
      {"axis2", {{"name", grid.axis2.name}, {"unit", grid.axis2.unit}, {"values", grid.axis2.values}}},
      {"temperature_K", std::move(temps)},
      {"status", std::move(status)},
  };
  if (grid.has_torque) out["torque_Nm"] = std::move(torques);
  return out;
}

nlohmann::json to_json(const ZeroTorqueCurve& curve) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"detuning_rad_s", p.detuning},
                      {"offset_m", p.offset},
                      {"temperature_K", p.temperature},
                      {"torque_Nm", p.torque}});
  }
  return {{"bracket_width_m", curve.bracket_width}, {"points", std::move(points)}};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& text, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("map file line " + std::to_string(line) + ": bad number '" + text +
                             "'");
  }
  return value;
}

EquilibriumStatus parse_status(const std::string& text, int line) {
  for (auto s : {EquilibriumStatus::converged, EquilibriumStatus::no_root,
                 EquilibriumStatus::runaway_heating, EquilibriumStatus::not_converged}) {
    if (text == to_string(s)) return s;
  }
  throw std::runtime_error("map file line " + std::to_string(line) + ": unknown status '" +
                           text + "'");
}

}  // namespace

SweepGrid read_csv_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("map file: missing or unexpected header");
  }
  struct Row {
    double a1, a2;
    SweepCell cell;
    bool has_torque;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 5) {
      throw std::runtime_error("map file line " + std::to_string(line_no) + ": expected 5 fields");
    }
    Row r{parse_field(f[0], line_no), parse_field(f[1], line_no), {}, !f[3].empty()};
    r.cell.status = parse_status(f[4], line_no);
    if (r.cell.status == EquilibriumStatus::converged) {
      if (f[2].empty()) {
        throw std::runtime_error("map file line " + std::to_string(line_no) +
                                 ": converged cell without a temperature");
      }
      r.cell.temperature = parse_field(f[2], line_no);
    }
    if (r.has_torque) r.cell.torque = parse_field(f[3], line_no);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::runtime_error("map file: no data rows");

  std::map<double, std::size_t> a1_index;
  std::map<double, std::size_t> a2_index;
  for (const auto& r : rows) {
    a1_index.emplace(r.a1, 0);
    a2_index.emplace(r.a2, 0);
  }
  SweepGrid grid;
  grid.axis1.name = "axis1";
  grid.axis2.name = "axis2";
  for (auto& [v, idx] : a1_index) {
    idx = grid.axis1.values.size();
    grid.axis1.values.push_back(v);
  }
  for (auto& [v, idx] : a2_index) {
    idx = grid.axis2.values.size();
    grid.axis2.values.push_back(v);
  }
  if (rows.size() != grid.rows() * grid.cols()) {
    throw std::runtime_error("map file: rows do not form a complete rectangular grid");
  }
  grid.cells.resize(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (const auto& r : rows) {
    const std::size_t k = a1_index[r.a1] * grid.cols() + a2_index[r.a2];
    if (seen[k]) throw std::runtime_error("map file: duplicate grid point");
    seen[k] = true;
    grid.cells[k] = r.cell;
    grid.has_torque = grid.has_torque || r.has_torque;
  }
  return grid;
}

}  // namespace rwcool
