#include "wvarent/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "wvarent/error.hpp"

namespace wvarent {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "integrand returned " << y << " at x = " << x;
    throw Error(ErrorCode::NonFiniteIntegrand, msg.str());
  }
  return y;
}

Segment kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> lo{};
  std::array<double, 7> hi{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    lo[j] = checked(f, center - dx);
    hi[j] = checked(f, center + dx);
    kronrod += kKronrodWeights[j] * (lo[j] + hi[j]);
    abs_sum += kKronrodWeights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (lo[j] + hi[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  }
  const double scale = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * scale;
  const double resabs = abs_sum * scale;
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, kronrod * half, err};
}

bool splittable(const Segment& s) {
  const double width = s.b - s.a;
  const double mag = std::max(std::abs(s.a), std::abs(s.b));
  return width > 8.0 * kEps * mag && width > 1e-300;
}

// Global adaptive bisection of the worst segment. `floor_abs` is an absolute
// tolerance supplied by the caller on top of cfg (used for tail pieces).
QuadratureResult adapt(const Integrand& f, double a, double b, const QuadratureConfig& cfg,
                       double floor_abs, int budget) {
  std::priority_queue<Segment> heap;
  heap.push(kronrod15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int used = 1;
  std::vector<Segment> frozen;
  auto target = [&] { return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total), floor_abs}); };
  while (error > target() && !heap.empty()) {
    if (used >= budget) {
      std::ostringstream msg;
      msg << "subdivision budget " << budget << " exhausted on [" << a << ", " << b
          << "], estimate " << total << " +/- " << error;
      throw Error(ErrorCode::NonConvergence, msg.str());
    }
    Segment worst = heap.top();
    heap.pop();
    if (!splittable(worst)) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  // Re-sum from the pieces so the running update does not leak roundoff.
  double sum = 0.0;
  double err = 0.0;
  for (const auto& s : frozen) {
    sum += s.value;
    err += s.error;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (err > 1e3 * std::max({cfg.abs_tol, cfg.rel_tol * std::abs(sum), floor_abs})) {
    std::ostringstream msg;
    msg << "roundoff limit reached on [" << a << ", " << b << "], estimate " << sum
        << " +/- " << err;
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  return {sum, err, used, std::nullopt};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::DegenerateParameter, "quadrature tolerances must be positive");
  }
  if (!(tail_mass > 0.0) || !(tail_mass < 1e-6)) {
    throw Error(ErrorCode::DegenerateParameter, "tail_mass must lie in (0, 1e-6)");
  }
  if (max_subdivisions < 1) {
    throw Error(ErrorCode::DegenerateParameter, "max_subdivisions must be positive");
  }
}

QuadratureResult integrate(const Integrand& f, double lower, double upper,
                           const QuadratureConfig& cfg, const TruncationQuantile& truncation_quantile) {
  cfg.validate();
  if (std::isnan(lower) || std::isnan(upper) || lower == -kInfinity) {
    throw Error(ErrorCode::DegenerateParameter, "integration limits must be finite below");
  }
  if (upper == lower) return {0.0, 0.0, 0, std::nullopt};
  if (upper < lower) {
    QuadratureResult r = integrate(f, upper, lower, cfg, truncation_quantile);
    r.value = -r.value;
    return r;
  }
  if (std::isfinite(upper)) return adapt(f, lower, upper, cfg, 0.0, cfg.max_subdivisions);

  double cut = lower + 1.0;
  if (truncation_quantile) {
    const double q = truncation_quantile(1.0 - cfg.tail_mass);
    if (std::isfinite(q) && q > lower) cut = q;
  }
  QuadratureResult body = adapt(f, lower, cut, cfg, 0.0, cfg.max_subdivisions);
  int used = body.subdivisions_used;
  double total = body.value;
  double error = body.abs_error_estimate;

  // Doubling continuation: piece k covers [x_k, x_k + w * 2^k].
  double width = std::max(cut - lower, 1.0);
  double left = cut;
  double previous = kInfinity;
  int quiet = 0;
  constexpr int kMaxPieces = 200;
  for (int piece = 0; piece < kMaxPieces; ++piece) {
    const double right = left + width;
    if (!std::isfinite(right)) break;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    const QuadratureResult part =
        adapt(f, left, right, cfg, 0.25 * tol, std::max(1, cfg.max_subdivisions - used));
    used += part.subdivisions_used;
    total += part.value;
    error += part.abs_error_estimate;
    const double mag = std::abs(part.value);
    // Remaining tail estimated as a geometric series in the piece ratio.
    double remaining = mag;
    if (previous > 0.0 && std::isfinite(previous) && mag < previous) {
      const double ratio = mag / previous;
      remaining = mag * ratio / (1.0 - ratio);
    }
    const double now_tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (mag <= now_tol && remaining <= now_tol) {
      if (++quiet >= 2) {
        error += remaining;
        return {total, error, used, right};
      }
    } else {
      quiet = 0;
    }
    previous = mag;
    left = right;
    width *= 2.0;
  }
  std::ostringstream msg;
  msg << "semi-infinite integral does not settle (tail still contributing beyond x = " << left
      << "), partial value " << total;
  throw Error(ErrorCode::NonConvergence, msg.str());
}

}  // namespace wvarent
