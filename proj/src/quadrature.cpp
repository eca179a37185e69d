#include "rwcool/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rwcool/constants.hpp"

namespace rwcool {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 200) {
    throw std::invalid_argument("gauss_hermite: order must lie in [1, 200], got " +
                                std::to_string(order));
  }
  const int n = order;
  const double pi_m4 = 1.0 / std::sqrt(std::sqrt(constants::pi));
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));

  // Roots come out in decreasing order; the asymptotic initial guesses follow
  // the classic gauher recipe.
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    }

    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pi_m4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      derivative = std::sqrt(2.0 * n) * p2;
      const double step = p1 / derivative;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    // Re-evaluate at the polished root for the weight.
    double p1 = pi_m4;
    double p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
    }
    derivative = std::sqrt(2.0 * n) * p2;

    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = z;
    x[hi] = -z;
    w[lo] = w[hi] = 2.0 / (derivative * derivative);
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;

  GaussHermiteRule rule;
  rule.order = n;
  rule.nodes.assign(x.rbegin(), x.rend());
  rule.weights.assign(w.rbegin(), w.rend());
  return rule;
}

void validate(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  if (!(spec.abs_tol >= 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be >= 0");
  if (spec.max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  }
}

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec) {
  validate(spec);
  if (!(a < b)) throw std::invalid_argument("integrate_1d: require a < b");
  const std::array<double, 2> ends{a, b};
  const auto res = integrate_adaptive<1>([&f](double x) { return std::array<double, 1>{f(x)}; },
                                         ends, spec, ErrorReference::value);
  return {res.value[0], res.error[0]};
}

QuadratureResult integrate_disk_xy(const std::function<double(double, double)>& f,
                                   double radius, const QuadratureSpec& spec) {
  validate(spec);
  if (!(radius > 0.0)) throw std::invalid_argument("integrate_disk_xy: radius must be > 0");

  QuadratureSpec inner = spec;
  inner.abs_tol = spec.abs_tol / (2.0 * radius);
  double worst_inner_error = 0.0;

  auto column = [&](double x) {
    const double h2 = radius * radius - x * x;
    if (h2 <= 0.0) return 0.0;
    const double h = std::sqrt(h2);
    const auto res = integrate_1d([&](double y) { return f(x, y); }, -h, h, inner);
    worst_inner_error = std::max(worst_inner_error, res.error);
    return res.value;
  };
  const auto outer = integrate_1d(column, -radius, radius, spec);
  return {outer.value, outer.error + 2.0 * radius * worst_inner_error};
}

VelocityIntegrator::VelocityIntegrator(int order, double narrow_width, QuadratureSpec fallback)
    : rule_(gauss_hermite(order)), narrow_width_(narrow_width), fallback_(fallback) {
  validate(fallback_);
  if (!(narrow_width_ >= 0.0)) {
    throw std::invalid_argument("VelocityIntegrator: narrow_width must be >= 0");
  }
}

bool VelocityIntegrator::is_narrow(double floor, double slope) const {
  return std::sqrt(floor) < narrow_width_ * std::abs(slope);
}

LorentzianMoments VelocityIntegrator::moments(double floor, double center, double slope) const {
  return is_narrow(floor, slope) ? moments_adaptive(floor, center, slope)
                                 : moments_hermite(floor, center, slope);
}

LorentzianMoments VelocityIntegrator::moments_hermite(double floor, double center,
                                                      double slope) const {
  double m0 = 0.0;
  double m1 = 0.0;
  const std::size_t n = rule_.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = rule_.nodes[i];
    const double detune = center - slope * v;
    const double term = rule_.weights[i] / (floor + detune * detune);
    m0 += term;
    m1 += term * v;
  }
  return {m0 / constants::sqrt_pi, m1 / constants::sqrt_pi};
}

LorentzianMoments VelocityIntegrator::moments_adaptive(double floor, double center,
                                                       double slope) const {
  const double lim = truncation;
  std::vector<double> points{-lim, lim};
  if (slope != 0.0) {
    const double v0 = center / slope;
    const double width = std::sqrt(floor) / std::abs(slope);
    for (double k : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
      const double p = v0 + k * width;
      if (p > -lim && p < lim) points.push_back(p);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto integrand = [&](double v) {
    const double detune = center - slope * v;
    const double g = std::exp(-v * v) / (floor + detune * detune);
    return std::array<double, 2>{g, g * v};
  };
  const auto res = integrate_adaptive<2>(integrand, points, fallback_);
  return {res.value[0] / constants::sqrt_pi, res.value[1] / constants::sqrt_pi};
}

}  // namespace rwcool
