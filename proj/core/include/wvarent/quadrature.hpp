#pragma once

#include <functional>
#include <limits>
#include <optional>

namespace wvarent {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Probability mass left beyond the first cut of a semi-infinite range.
  double tail_mass = 1e-10;
  int max_subdivisions = 2000;

  /// Throws DegenerateParameter when a field is out of range.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions_used = 0;
  /// Final upper limit actually integrated to, when the range was semi-infinite.
  std::optional<double> truncated_at;
};

using Integrand = std::function<double(double)>;
/// Maps a probability p to the point below which mass p lies.
using TruncationQuantile = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over (lower, upper).
///
/// Nodes are strictly interior, so integrands with integrable endpoint
/// singularities (log terms at a support boundary) are never evaluated there.
/// When upper is +infinity the range is first cut at
/// truncation_quantile(1 - tail_mass) (or at lower + 1 without a quantile) and
/// then extended over doubling intervals until the remaining contribution is
/// below tolerance; a tail that keeps contributing raises NonConvergence.
QuadratureResult integrate(const Integrand& f, double lower, double upper,
                           const QuadratureConfig& cfg = {},
                           const TruncationQuantile& truncation_quantile = {});

}  // namespace wvarent
