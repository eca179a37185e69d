#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "rwcool/sweep.hpp"

namespace rwcool {

/// Header shared by every CSV the tool writes.
inline constexpr const char* kCsvHeader = "axis1,axis2,T_perp_K,torque_Nm,status";

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// One row per cell, axis1 outer. Non-converged cells leave T and torque empty.
void write_csv(std::ostream& out, const SweepGrid& grid);

/// One row per curve point: detuning (rad/s), offset (m), T, torque.
void write_csv(std::ostream& out, const ZeroTorqueCurve& curve);

/// Gnuplot "nonuniform matrix" of temperatures: first row is the axis2
/// values, each following row starts with its axis1 value. NaN marks
/// non-converged cells.
void write_gnuplot(std::ostream& out, const SweepGrid& grid);

nlohmann::json to_json(const SweepGrid& grid);
nlohmann::json to_json(const ZeroTorqueCurve& curve);

/// Rebuilds a grid from write_csv output. Throws std::runtime_error on a
/// malformed file or a row set that does not form a full rectangle.
SweepGrid read_csv_grid(std::istream& in);

}  // namespace rwcool
