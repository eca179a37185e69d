#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwcool {

/// Gauss-Hermite rule for int f(v) e^{-v^2} dv over the real line.
/// Nodes are sorted ascending; weights sum to sqrt(pi).
struct GaussHermiteRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence.
/// Throws std::invalid_argument unless 1 <= order <= 200.
GaussHermiteRule gauss_hermite(int order);

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
};

void validate(const QuadratureSpec& spec);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Raised when an adaptive rule exhausts its subdivision budget; carries the
/// best available estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, std::vector<double> best, std::vector<double> errors)
      : std::runtime_error(what), best_(std::move(best)), errors_(std::move(errors)) {}

  const std::vector<double>& best_estimate() const { return best_; }
  const std::vector<double>& error_estimate() const { return errors_; }

 private:
  std::vector<double> best_;
  std::vector<double> errors_;
};

/// What the relative tolerance of an adaptive integration is measured against.
enum class ErrorReference {
  value,      // |int f|
  magnitude,  // int |f|, robust when components cancel
};

template <std::size_t N>
struct AdaptiveResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  std::array<double, N> magnitude{};
  int subdivisions = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kronrod21_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kronrod21_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077923101491069, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> gauss10_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t N>
struct Segment {
  double a;
  double b;
  std::array<double, N> value;
  std::array<double, N> error;
  std::array<double, N> magnitude;
  bool splittable;
};

template <std::size_t N>
void check_finite(const std::array<double, N>& v, double x) {
  for (double c : v) {
    if (!std::isfinite(c)) {
      throw std::domain_error("integrand is not finite at x = " + std::to_string(x));
    }
  }
}

template <std::size_t N, class F>
Segment<N> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, N> fc = f(center);
  check_finite<N>(fc, center);

  std::array<double, N> res_k{};
  std::array<double, N> res_g{};
  std::array<double, N> res_abs{};
  std::array<std::array<double, N>, 10> f1{};
  std::array<std::array<double, N>, 10> f2{};
  for (std::size_t i = 0; i < N; ++i) {
    res_k[i] = kronrod21_weights[10] * fc[i];
    res_abs[i] = std::abs(res_k[i]);
  }
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kronrod21_nodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    check_finite<N>(f1[j], center - dx);
    check_finite<N>(f2[j], center + dx);
    const double wk = kronrod21_weights[j];
    const bool gauss_node = (j % 2) == 1;
    for (std::size_t i = 0; i < N; ++i) {
      const double sum = f1[j][i] + f2[j][i];
      res_k[i] += wk * sum;
      res_abs[i] += wk * (std::abs(f1[j][i]) + std::abs(f2[j][i]));
      if (gauss_node) res_g[i] += gauss10_weights[j / 2] * sum;
    }
  }

  Segment<N> seg{a, b, {}, {}, {}, true};
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < N; ++i) {
    const double mean = 0.5 * res_k[i];
    double asc = kronrod21_weights[10] * std::abs(fc[i] - mean);
    for (std::size_t j = 0; j < 10; ++j) {
      asc += kronrod21_weights[j] * (std::abs(f1[j][i] - mean) + std::abs(f2[j][i] - mean));
    }
    asc *= std::abs(half);
    const double abs_int = res_abs[i] * std::abs(half);
    double err = std::abs((res_k[i] - res_g[i]) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    if (abs_int > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_int, err);
    seg.value[i] = res_k[i] * half;
    seg.error[i] = err;
    seg.magnitude[i] = abs_int;
  }
  const double width_floor = 4.0 * eps * std::max({std::abs(a), std::abs(b), tiny});
  seg.splittable = (b - a) > width_floor;
  return seg;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand
/// over [points.front(), points.back()], with the interior points as
/// mandatory breakpoints. Converged when every component satisfies
/// error <= max(abs_tol, rel_tol * reference).
template <std::size_t N, class F>
AdaptiveResult<N> integrate_adaptive(F&& f, std::span<const double> points,
                                     const QuadratureSpec& spec,
                                     ErrorReference reference = ErrorReference::magnitude) {
  if (points.size() < 2) throw std::invalid_argument("integrate_adaptive: need two endpoints");
  std::vector<detail::Segment<N>> segments;
  segments.reserve(static_cast<std::size_t>(spec.max_subdivisions) + points.size());
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    if (!(points[p] < points[p + 1])) {
      throw std::invalid_argument("integrate_adaptive: breakpoints must increase");
    }
    segments.push_back(detail::kronrod21<N>(f, points[p], points[p + 1]));
  }

  AdaptiveResult<N> out;
  for (;;) {
    out.value.fill(0.0);
    out.error.fill(0.0);
    out.magnitude.fill(0.0);
    for (const auto& s : segments) {
      for (std::size_t i = 0; i < N; ++i) {
        out.value[i] += s.value[i];
        out.error[i] += s.error[i];
        out.magnitude[i] += s.magnitude[i];
      }
    }
    std::array<double, N> tol{};
    bool converged = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double ref =
          reference == ErrorReference::value ? std::abs(out.value[i]) : out.magnitude[i];
      tol[i] = std::max(spec.abs_tol, spec.rel_tol * ref);
      if (out.error[i] > tol[i]) converged = false;
    }
    if (converged) return out;

    std::size_t worst = segments.size();
    double worst_score = -1.0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (!segments[s].splittable) continue;
      double score = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double scale = tol[i] > 0.0 ? tol[i] : std::numeric_limits<double>::min();
        score = std::max(score, segments[s].error[i] / scale);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = s;
      }
    }
    if (out.subdivisions >= spec.max_subdivisions || worst == segments.size()) {
      throw QuadratureError(
          worst == segments.size() ? "adaptive quadrature: roundoff limit reached"
                                   : "adaptive quadrature: subdivision limit reached",
          std::vector<double>(out.value.begin(), out.value.end()),
          std::vector<double>(out.error.begin(), out.error.end()));
    }
    const double a = segments[worst].a;
    const double b = segments[worst].b;
    const double mid = 0.5 * (a + b);
    segments[worst] = detail::kronrod21<N>(f, a, mid);
    segments.push_back(detail::kronrod21<N>(f, mid, b));
    ++out.subdivisions;
  }
}

/// Adaptive integral of a scalar function on [a, b]; the relative tolerance
/// is measured against |value|. Throws QuadratureError on budget exhaustion.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec = {});

/// Nested adaptive integral over the disk x^2 + y^2 <= radius^2, with the
/// inner y limits at exactly +-sqrt(radius^2 - x^2).
QuadratureResult integrate_disk_xy(const std::function<double(double, double)>& f,
                                   double radius, const QuadratureSpec& spec = {});

/// (1/sqrt(pi)) int e^{-v^2} {1, v} L(v) dv for a Lorentzian
/// L(v) = 1 / (floor + (center - slope v)^2).
struct LorentzianMoments {
  double zeroth = 0.0;
  double first = 0.0;
};

/// Thermal average of a Lorentzian line over a Gaussian velocity
/// distribution. Uses a Gauss-Hermite rule while the Lorentzian half-width in
/// v units, sqrt(floor)/slope, is at least `narrow_width`; narrower lines are
/// integrated adaptively on [-truncation, truncation] with breakpoints around
/// the line center.
class VelocityIntegrator {
 public:
  static constexpr int default_order = 40;
  static constexpr double default_narrow_width = 1.0;
  static constexpr double truncation = 8.0;

  explicit VelocityIntegrator(int order = default_order,
                              double narrow_width = default_narrow_width,
                              QuadratureSpec fallback = {1e-10, 0.0, 2000});

  LorentzianMoments moments(double floor, double center, double slope) const;

  /// Forces the adaptive route regardless of line width.
  LorentzianMoments moments_adaptive(double floor, double center, double slope) const;
  LorentzianMoments moments_hermite(double floor, double center, double slope) const;

  bool is_narrow(double floor, double slope) const;

  const GaussHermiteRule& rule() const { return rule_; }
  double narrow_width() const { return narrow_width_; }

 private:
  GaussHermiteRule rule_;
  double narrow_width_;
  QuadratureSpec fallback_;
};

}  // namespace rwcool
