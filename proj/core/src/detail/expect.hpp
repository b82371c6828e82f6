#pragma once

#include <functional>

#include "wvarent/distributions.hpp"

namespace wvarent::detail {

/// Densities below this contribute nothing: f (log f)^m -> 0 in the limit.
inline constexpr double kDensityFloor = 1e-300;

/// Part of the support with its probability mass; the renormalized density
/// f / mass is the residual (upper) or past (lower) law.
struct Region {
  double lo = 0.0;
  double hi = kInfinity;
  double log_mass = 0.0;
  bool upper_tail = true;
};

/// (max(t, lower), upper) with mass sf(t). TailUnderflow below the floor.
Region upper_region(const Distribution& dist, double t);
/// (lower, min(s, upper)) with mass cdf(s). TailUnderflow below the floor.
Region lower_region(const Distribution& dist, double s);

/// g(x, log f_r(x)) where f_r is the renormalized density.
using RegionIntegrand = std::function<double(double x, double log_fr)>;

/// E[g] under f_r on the region.
QuadratureResult expect(const Distribution& dist, const Region& region, const RegionIntegrand& g,
                        const QuadratureConfig& cfg);

/// Mean and variance of the weighted information content -w(X) log f_r(X).
struct InfoMoments {
  double entropy = 0.0;
  double entropy_error = 0.0;
  double variance = 0.0;
  double variance_error = 0.0;
};

InfoMoments info_moments(const Distribution& dist, const Region& region,
                         const std::function<double(double)>& w, const QuadratureConfig& cfg);

}  // namespace wvarent::detail
