#include <atomic>
#include <cmath>

#include "doctest.h"
#include "rwcool/constants.hpp"
#include "rwcool/sweep.hpp"

using namespace rwcool;

namespace {

const AtomicSpecies be = AtomicSpecies::beryllium9();
constexpr double kMHz = constants::two_pi * 1e6;

CrystalState fig4_crystal() { return {225e-6, 2.77e9, constants::two_pi * 45e3}; }

PerpBeam fig4_beam() { return {0.5, 30e-6, 14e-6, -25.0 * kMHz}; }

// Grid whose temperature field is given analytically.
template <class F>
SweepGrid synthetic(const std::vector<double>& a1, const std::vector<double>& a2, F field) {
  SweepGrid g;
  g.axis1 = {"a1", "", a1};
  g.axis2 = {"a2", "", a2};
  for (double x : a1) {
    for (double y : a2) {
      SweepCell c;
      c.status = EquilibriumStatus::converged;
      c.temperature = field(x, y);
      g.cells.push_back(c);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("linspace") {
  const auto v = linspace(-1.0, 1.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v.front() == -1.0);
  CHECK(v[2] == doctest::Approx(0.0));
  CHECK(v.back() == 1.0);
  CHECK(linspace(3.0, 7.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("parallel_for visits every index once and forwards exceptions") {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("physical sweep is independent of the worker count") {
  const auto det = linspace(-30.0 * kMHz, -20.0 * kMHz, 3);
  const auto off = linspace(5e-6, 25e-6, 4);
  SweepOptions serial;
  SweepOptions threaded;
  threaded.workers = 3;
  const auto a = sweep_physical(be, fig4_beam(), fig4_crystal(), ParBeam{}, det, off, serial);
  const auto b = sweep_physical(be, fig4_beam(), fig4_crystal(), ParBeam{}, det, off, threaded);
  REQUIRE(a.cells.size() == 12);
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 4);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].temperature == b.cells[i].temperature);
    CHECK(a.cells[i].torque == b.cells[i].torque);
    CHECK(a.cells[i].status == b.cells[i].status);
  }
  // The cell at (-25 MHz, 11.67 um) is near the trough.
  CHECK(a.at(1, 1).temperature == doctest::Approx(0.64e-3).epsilon(0.05));
}

TEST_CASE("dark cells carry a status instead of a temperature") {
  PerpBeam dark = fig4_beam();
  dark.s0 = 0.0;
  const auto cell = solve_physical_cell(be, dark, fig4_crystal(), ParBeam{}, SweepOptions{});
  CHECK(cell.status == EquilibriumStatus::no_root);
  CHECK_FALSE(cell.converged());
  SweepGrid g;
  g.axis1 = {"a", "", {0.0}};
  g.axis2 = {"b", "", {0.0}};
  g.cells = {cell};
  CHECK_FALSE(g.temperature(0, 0).has_value());
  CHECK_FALSE(trough_minimum(g).has_value());
}

TEST_CASE("sweep rejects bad axes") {
  CHECK_THROWS_AS(sweep_physical(be, fig4_beam(), fig4_crystal(), ParBeam{}, {}, {1e-6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sweep_physical(be, fig4_beam(), fig4_crystal(), ParBeam{}, {2.0, 1.0}, {1e-6}),
      std::invalid_argument);
}

TEST_CASE("reduced sweep on the zero-dispersion column matches frozen oracle roots") {
  // 2000^2 midpoint-sum roots of the reduced balance at S0 = 0.5, Dw = 0.
  const auto g = sweep_reduced(be, 0.5, {-2.0, -1.0}, {0.0});
  CHECK_FALSE(g.has_torque);
  CHECK(*g.temperature(0, 0) == doctest::Approx(0.508e-3).epsilon(0.01));
  CHECK(*g.temperature(1, 0) == doctest::Approx(0.497e-3).epsilon(0.01));
}

TEST_CASE("reduced sweep reproduces physical temperatures near the trough") {
  const auto crystal = fig4_crystal();
  const auto det = linspace(-30.0 * kMHz, -20.0 * kMHz, 3);
  const auto off = linspace(8e-6, 20e-6, 3);
  const auto phys = sweep_physical(be, fig4_beam(), crystal, ParBeam{}, det, off);
  for (std::size_t i = 0; i < det.size(); ++i) {
    for (std::size_t j = 0; j < off.size(); ++j) {
      PerpBeam beam = fig4_beam();
      beam.detuning = det[i];
      beam.offset = off[j];
      const auto p =
          reduced_params_from_physical(be, beam, crystal, DensityCorrection::rescaled_beam);
      const auto cell = solve_reduced_cell(be, p, SweepOptions{});
      REQUIRE(cell.converged());
      CHECK(cell.temperature == doctest::Approx(*phys.temperature(i, j)).epsilon(0.05));
    }
  }
}

TEST_CASE("zero-torque curve brackets a sign change") {
  const auto crystal = fig4_crystal();
  const auto beam = fig4_beam();
  ZeroTorqueOptions zt;
  zt.offset_lo = -10e-6;
  zt.offset_hi = 40e-6;
  zt.scan_points = 11;
  const auto curve = zero_torque_curve(be, beam, crystal, ParBeam{}, {-25.0 * kMHz}, zt);
  REQUIRE(curve.points.size() == 1);
  const auto& p = curve.points[0];
  CHECK(curve.bracket_width == zt.bracket_width);
  CHECK(p.offset == doctest::Approx(13.6e-6).epsilon(0.03));

  auto torque_at = [&](double d) {
    PerpBeam b = beam;
    b.offset = d;
    return solve_physical_cell(be, b, crystal, ParBeam{}, SweepOptions{}).torque;
  };
  CHECK(torque_at(p.offset - zt.bracket_width) < 0.0);
  CHECK(torque_at(p.offset + zt.bracket_width) > 0.0);

  // Dense scan: the sign change lies within 1 um of the curve.
  double previous = torque_at(p.offset - 2e-6);
  double crossing = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double d = p.offset - 2e-6 + i * 0.1e-6;
    const double t = torque_at(d);
    if (previous < 0.0 && t >= 0.0) crossing = d;
    previous = t;
  }
  CHECK(std::abs(crossing - p.offset) <= 1e-6);

  const auto coldest = coldest_point(curve);
  REQUIRE(coldest.has_value());
  CHECK(coldest->temperature == p.temperature);
  CHECK_FALSE(coldest_point(ZeroTorqueCurve{}).has_value());
}

TEST_CASE("zero-torque curve omits detunings without a sign change") {
  ZeroTorqueOptions zt;
  zt.offset_lo = 30e-6;
  zt.offset_hi = 50e-6;
  zt.scan_points = 3;
  const auto curve =
      zero_torque_curve(be, fig4_beam(), fig4_crystal(), ParBeam{}, {-25.0 * kMHz}, zt);
  CHECK(curve.points.empty());
}

TEST_CASE("contour slope of exactly linear level sets") {
  const auto a1 = linspace(-10.0, 10.0, 41);
  const auto a2 = linspace(-8.0, 12.0, 37);
  const double m = 0.37;
  const auto plane = synthetic(a1, a2, [&](double x, double y) { return y - m * x; });
  const auto fit = contour_slope(plane, 1.3);
  CHECK(fit.slope == doctest::Approx(m).epsilon(1e-6));
  CHECK(fit.residual < 1e-9);
  CHECK(fit.branches == 1);

  // A V-shaped valley gives two parallel branches with different intercepts.
  const auto valley =
      synthetic(a1, a2, [&](double x, double y) { return std::abs(y - m * x - 2.0); });
  const auto v = contour_slope(valley, 3.0);
  CHECK(v.branches == 2);
  CHECK(v.slope == doctest::Approx(m).epsilon(1e-6));
}

TEST_CASE("contour extraction follows a closed level set and skips bad cells") {
  const auto a = linspace(-2.0, 2.0, 41);
  auto bowl = synthetic(a, a, [](double x, double y) { return x * x + y * y; });
  const auto lines = extract_contours(bowl, 1.0);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].size() > 20);
  for (const auto& p : lines[0]) {
    CHECK(std::hypot(p.a1, p.a2) == doctest::Approx(1.0).epsilon(0.01));
  }
  CHECK(lines[0].front().a1 == doctest::Approx(lines[0].back().a1));

  bowl.at(30, 20).status = EquilibriumStatus::runaway_heating;
  const auto broken = extract_contours(bowl, 1.0);
  REQUIRE(broken.size() == 1);
  CHECK(broken[0].size() < lines[0].size());

  CHECK_THROWS_AS(contour_slope(bowl, 100.0), ContourError);
}

TEST_CASE("trough minimum and slope are stable under grid refinement") {
  const auto crystal = fig4_crystal();
  const auto coarse = sweep_physical(be, fig4_beam(), crystal, ParBeam{},
                                     linspace(-40.0 * kMHz, -10.0 * kMHz, 9),
                                     linspace(0.0, 40e-6, 9));
  const auto fine = sweep_physical(be, fig4_beam(), crystal, ParBeam{},
                                   linspace(-40.0 * kMHz, -10.0 * kMHz, 17),
                                   linspace(0.0, 40e-6, 17));
  const auto mc = trough_minimum(coarse);
  const auto mf = trough_minimum(fine);
  REQUIRE(mc.has_value());
  REQUIRE(mf.has_value());
  CHECK(mc->temperature == doctest::Approx(mf->temperature).epsilon(0.02));
  const double sc = contour_slope(coarse, 0.8e-3).slope;
  const double sf = contour_slope(fine, 0.8e-3).slope;
  CHECK(sc == doctest::Approx(sf).epsilon(0.03));
}
