#pragma once

// Shared numerical primitives: adaptive Gauss-Kronrod quadrature, Richardson
// differentiation, phase unwrapping, parabolic peak refinement, Gauss-Legendre
// rules, and series-guarded evaluation of removable singularities.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "tunneltimes/errors.hpp"

namespace tunneltimes {

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 60;
};

struct Estimate {
  double value;
  double error;
};

/// Below this |alpha| the alpha-ratios switch to their Maclaurin forms.
inline constexpr double kSeriesThreshold = 1e-3;

/// sinh(a)/a for real or complex a. Real for purely imaginary a (= sin|a|/|a|).
template <typename Scalar>
Scalar sinhc(const Scalar& a) {
  using std::abs;
  if (abs(a) < kSeriesThreshold) {
    const Scalar a2 = a * a;
    return Scalar(1) + a2 * (Scalar(1.0 / 6.0) + a2 * (Scalar(1.0 / 120.0) + a2 * Scalar(1.0 / 5040.0)));
  }
  using std::sinh;
  return sinh(a) / a;
}

/// (sinh(2a)/(2a) - 1) / a^2, the removable part of sinh(a)cosh(a)/a near a = 0.
template <typename Scalar>
Scalar sinh2c_excess(const Scalar& a) {
  using std::abs;
  const Scalar a2 = a * a;
  if (abs(a) < kSeriesThreshold) {
    return Scalar(2.0 / 3.0) + a2 * (Scalar(2.0 / 15.0) + a2 * Scalar(4.0 / 315.0));
  }
  return (sinhc(Scalar(2) * a) - Scalar(1)) / a2;
}

/// Drops the imaginary part of a quantity that must be real by continuation.
inline double real_by_continuation(std::complex<double> z, const char* what) {
  if (std::abs(z.imag()) > 1e-10 * std::max(std::abs(z.real()), 1e-300)) {
    throw ConsistencyError(std::string(what) + " has a non-negligible imaginary part (" +
                           std::to_string(z.imag()) + " vs real " + std::to_string(z.real()) + ")");
  }
  return z.real();
}

inline double real_by_continuation(double x, const char*) { return x; }

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment kronrod15(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw NumericError("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return Segment{a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// The error estimate is |K15 - G7| summed over segments, which is conservative
/// for smooth integrands. Throws NumericError once a segment would exceed
/// tol.max_depth bisections.
template <typename F>
Estimate integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  if (!(a < b)) {
    throw DomainError("integrate requires a < b, got [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  if (!(tol.abs_tol > 0.0 || tol.rel_tol > 0.0)) {
    throw DomainError("tolerance needs a positive abs_tol or rel_tol");
  }
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::kronrod15(f, a, b, 0));
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
    const detail::Segment worst = heap.top();
    if (worst.depth >= tol.max_depth) {
      throw NumericError("adaptive quadrature exceeded max_depth", value, error);
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Segment left = detail::kronrod15(f, worst.a, mid, worst.depth + 1);
    const detail::Segment right = detail::kronrod15(f, mid, worst.b, worst.depth + 1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  return {total, total_error};
}

inline double default_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

/// Central difference at steps h0 and 2 h0 combined by one Richardson level
/// (fourth order). The error estimate is the disagreement between the levels.
template <typename F>
Estimate differentiate(F&& f, double x, double h0) {
  if (!(h0 > 0.0)) throw DomainError("differentiate requires a positive step");
  const double fp1 = f(x + h0);
  const double fm1 = f(x - h0);
  const double fp2 = f(x + 2.0 * h0);
  const double fm2 = f(x - 2.0 * h0);
  if (!std::isfinite(fp1) || !std::isfinite(fm1) || !std::isfinite(fp2) || !std::isfinite(fm2)) {
    throw NumericError("non-finite sample while differentiating at x = " + std::to_string(x));
  }
  const double fine = (fp1 - fm1) / (2.0 * h0);
  const double coarse = (fp2 - fm2) / (4.0 * h0);
  return {(4.0 * fine - coarse) / 3.0, std::abs(fine - coarse) / 3.0};
}

template <typename F>
Estimate differentiate(F&& f, double x) {
  return differentiate(std::forward<F>(f), x, default_step(x));
}

/// Adds multiples of 2 pi so that consecutive differences lie in (-pi, pi].
inline std::vector<double> unwrap_phase(std::span<const double> samples) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out(samples.begin(), samples.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double step = samples[i] - samples[i - 1];
    while (step > std::numbers::pi) {
      step -= two_pi;
      offset -= two_pi;
    }
    while (step <= -std::numbers::pi) {
      step += two_pi;
      offset += two_pi;
    }
    out[i] = samples[i] + offset;
  }
  return out;
}

struct PeakRefinement {
  double position;
  bool degenerate;  // collinear triple; position is the grid maximum
};

/// Vertex of the parabola through (x, y) at i_max - 1, i_max, i_max + 1.
inline PeakRefinement refine_peak(std::span<const double> x, std::span<const double> y, std::size_t i_max) {
  if (x.size() != y.size()) throw DomainError("refine_peak: x and y sizes differ");
  if (i_max == 0 || i_max + 1 >= y.size()) throw DomainError("refine_peak: maximum needs both neighbours");
  if (!(y[i_max] > y[i_max - 1] && y[i_max] > y[i_max + 1])) {
    throw DomainError("refine_peak: index is not a strict local maximum");
  }
  const double x0 = x[i_max - 1], x1 = x[i_max], x2 = x[i_max + 1];
  const double y0 = y[i_max - 1], y1 = y[i_max], y2 = y[i_max + 1];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (std::abs(curvature) <= 1e-14 * (std::abs(d01) + std::abs(d12) + std::abs(y1))) {
    return {x1, true};
  }
  // y = y0 + d01 (x - x0) + curvature (x - x0)(x - x1)
  return {0.5 * (x0 + x1) - d01 / (2.0 * curvature), false};
}

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b], nodes ascending.
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre needs at least one node");
  if (!(a < b)) throw DomainError("gauss_legendre needs a < b");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes(i) = center - half * z;
    rule.nodes(n - 1 - i) = center + half * z;
    rule.weights(i) = half * weight;
    rule.weights(n - 1 - i) = half * weight;
  }
  if (n % 2 == 1) rule.nodes(m - 1) = center;
  return rule;
}

}  // namespace tunneltimes
