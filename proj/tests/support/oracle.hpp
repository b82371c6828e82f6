#pragma once

// Independent reference integrator for tests: double-exponential (tanh-sinh
// on finite ranges, exp-sinh on half lines) with step halving. It shares no
// code with the library's Gauss-Kronrod engine.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace oracle {

using Fn = std::function<double(double)>;

inline double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

/// Integral of f over (a, b), both finite.
inline double tanh_sinh(const Fn& f, double a, double b, double tol = 1e-13) {
  const double r = 0.5 * (b - a);
  const double half_pi = std::numbers::pi / 2.0;
  auto term = [&](double t) {
    const double s = half_pi * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = half_pi * std::cosh(t) / (ch * ch);
    // Distance from the nearer endpoint, computed without cancellation.
    const double d = r / (std::exp(2.0 * std::abs(s)) + 1.0) * 2.0;
    if (d <= 0.0) return 0.0;
    const double x = t >= 0 ? b - d : a + d;
    return w * finite_or_zero(f(x));
  };
  double h = 1.0;
  double sum = term(0.0);
  for (int k = 1; k <= 6 / h; ++k) sum += term(k * h) + term(-k * h);
  double prev = sum * h * r;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    for (double t = h; t <= 6.0; t += 2 * h) sum += term(t) + term(-t);
    const double cur = sum * h * r;
    if (level > 3 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

/// Integral of f over (a, infinity); exp-sinh substitution x = a + scale e^{pi/2 sinh t}.
inline double exp_sinh(const Fn& f, double a, double scale = 1.0, double tol = 1e-13) {
  const double half_pi = std::numbers::pi / 2.0;
  auto term = [&](double t) {
    const double e = std::exp(half_pi * std::sinh(t));
    const double x = a + scale * e;
    if (!std::isfinite(x) || x == a) return 0.0;
    return finite_or_zero(f(x)) * scale * e * half_pi * std::cosh(t);
  };
  double h = 1.0;
  double sum = term(0.0);
  for (int k = 1; k <= 5 / h; ++k) sum += term(k * h) + term(-k * h);
  double prev = sum * h;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    for (double t = h; t <= 5.0; t += 2 * h) sum += term(t) + term(-t);
    const double cur = sum * h;
    if (level > 3 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

inline double integral(const Fn& f, double a, double b, double scale = 1.0) {
  return std::isinf(b) ? exp_sinh(f, a, scale) : tanh_sinh(f, a, b);
}

/// Var[-w(X) log f_t(X)] for X > t under density pdf with survival s_t, by
/// the raw second moment minus squared mean (the library centres instead).
inline double wrve(const Fn& pdf, double s_t, double t, double upper, const Fn& w = [](double x) { return x; },
                   double scale = 1.0) {
  auto ic = [&](double x) {
    const double ft = pdf(x) / s_t;
    return ft > 0 ? -w(x) * std::log(ft) : 0.0;
  };
  const double m1 = integral([&](double x) { return pdf(x) / s_t * ic(x); }, t, upper, scale);
  const double m2 = integral([&](double x) { const double v = ic(x); return pdf(x) / s_t * v * v; }, t, upper, scale);
  return m2 - m1 * m1;
}

inline double wve(const Fn& pdf, double lower, double upper, const Fn& w = [](double x) { return x; },
                  double scale = 1.0) {
  return wrve(pdf, 1.0, lower, upper, w, scale);
}

}  // namespace oracle
