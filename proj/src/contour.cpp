#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "rwcool/sweep.hpp"

namespace rwcool {

namespace {

// Identifies a grid edge: horizontal edges join (i,j)-(i+1,j), vertical
// edges join (i,j)-(i,j+1).
struct EdgeKey {
  std::size_t i;
  std::size_t j;
  bool along_axis1;

  auto operator<=>(const EdgeKey&) const = default;
};

struct Segment {
  EdgeKey a;
  EdgeKey b;
};

}  // namespace

std::vector<std::vector<ContourPoint>> extract_contours(const SweepGrid& grid, double level) {
  if (!std::isfinite(level)) throw std::invalid_argument("extract_contours: level must be finite");
  const auto& x = grid.axis1.values;
  const auto& y = grid.axis2.values;
  std::vector<std::vector<ContourPoint>> lines;
  if (grid.rows() < 2 || grid.cols() < 2) return lines;

  auto value = [&](std::size_t i, std::size_t j) { return *grid.temperature(i, j); };
  auto edge_point = [&](const EdgeKey& e) {
    const std::size_t i2 = e.along_axis1 ? e.i + 1 : e.i;
    const std::size_t j2 = e.along_axis1 ? e.j : e.j + 1;
    const double v1 = value(e.i, e.j);
    const double v2 = value(i2, j2);
    const double t = (level - v1) / (v2 - v1);
    return ContourPoint{x[e.i] + t * (x[i2] - x[e.i]), y[e.j] + t * (y[j2] - y[e.j])};
  };

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < grid.rows(); ++i) {
    for (std::size_t j = 0; j + 1 < grid.cols(); ++j) {
      const std::array<std::pair<std::size_t, std::size_t>, 4> corners{
          {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<double, 4> v{};
      bool usable = true;
      for (std::size_t c = 0; c < 4; ++c) {
        const auto t = grid.temperature(corners[c].first, corners[c].second);
        if (!t) {
          usable = false;
          break;
        }
        v[c] = *t;
      }
      if (!usable) continue;

      // Edges in corner order: bottom, right, top, left.
      const std::array<EdgeKey, 4> edges{{{i, j, true},
                                          {i + 1, j, false},
                                          {i, j + 1, true},
                                          {i, j, false}}};
      std::vector<std::size_t> crossed;
      for (std::size_t c = 0; c < 4; ++c) {
        const bool above_a = v[c] >= level;
        const bool above_b = v[(c + 1) % 4] >= level;
        if (above_a != above_b) crossed.push_back(c);
      }
      if (crossed.size() == 2) {
        segments.push_back({edges[crossed[0]], edges[crossed[1]]});
      } else if (crossed.size() == 4) {
        // Saddle: the cell centre decides which corners are joined.
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool centre_matches_first = (centre >= level) == (v[0] >= level);
        if (centre_matches_first) {
          segments.push_back({edges[0], edges[1]});
          segments.push_back({edges[2], edges[3]});
        } else {
          segments.push_back({edges[3], edges[0]});
          segments.push_back({edges[1], edges[2]});
        }
      }
    }
  }

  std::map<EdgeKey, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    touching[segments[s].a].push_back(s);
    touching[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](std::size_t first, EdgeKey start) {
    std::vector<ContourPoint> line{edge_point(start)};
    EdgeKey at = start;
    std::size_t s = first;
    while (true) {
      used[s] = true;
      at = segments[s].a == at ? segments[s].b : segments[s].a;
      line.push_back(edge_point(at));
      std::size_t next = segments.size();
      for (std::size_t cand : touching[at]) {
        if (!used[cand]) next = cand;
      }
      if (next == segments.size()) break;
      s = next;
    }
    lines.push_back(std::move(line));
  };

  // Open polylines start at an edge touched by one segment; closed loops after.
  for (const auto& [key, list] : touching) {
    if (list.size() == 1 && !used[list[0]]) walk(list[0], key);
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(s, segments[s].a);
  }
  return lines;
}

ContourFit contour_slope(const SweepGrid& grid, double level) {
  const auto lines = extract_contours(grid, level);
  ContourFit fit;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& line : lines) {
    if (line.size() < 2) continue;
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : line) {
      mx += p.a1;
      my += p.a2;
    }
    mx /= static_cast<double>(line.size());
    my /= static_cast<double>(line.size());
    for (const auto& p : line) {
      sxx += (p.a1 - mx) * (p.a1 - mx);
      sxy += (p.a1 - mx) * (p.a2 - my);
    }
    fit.points += line.size();
    ++fit.branches;
  }
  if (fit.points < 3 || !(sxx > 0.0)) {
    throw ContourError("contour_slope: level set too short to fit a slope");
  }
  fit.slope = sxy / sxx;

  double ss = 0.0;
  for (const auto& line : lines) {
    if (line.size() < 2) continue;
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : line) {
      mx += p.a1;
      my += p.a2;
    }
    mx /= static_cast<double>(line.size());
    my /= static_cast<double>(line.size());
    for (const auto& p : line) {
      const double r = (p.a2 - my) - fit.slope * (p.a1 - mx);
      ss += r * r;
    }
  }
  fit.residual = std::sqrt(ss / static_cast<double>(fit.points));
  return fit;
}

}  // namespace rwcool
