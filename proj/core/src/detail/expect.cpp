#include "detail/expect.hpp"

#include <cmath>
#include <sstream>

#include "wvarent/error.hpp"

namespace wvarent::detail {

namespace {

const double kLogDensityFloor = std::log(kDensityFloor);

void underflow(const Distribution& dist, double at, double mass) {
  std::ostringstream msg;
  msg << "conditioning mass " << mass << " at " << at << " for " << dist.spec();
  throw Error(ErrorCode::TailUnderflow, msg.str());
}

}  // namespace

Region upper_region(const Distribution& dist, double t) {
  const Support s = dist.support();
  if (std::isnan(t)) throw Error(ErrorCode::OutOfSupport, "t is NaN");
  const double lo = std::max(t, s.lower);
  const double mass = dist.sf(lo);
  if (!(mass > kSurvivalFloor) || lo >= s.upper) underflow(dist, t, mass);
  return {lo, s.upper, dist.log_sf(lo), true};
}

Region lower_region(const Distribution& dist, double sv) {
  const Support s = dist.support();
  if (std::isnan(sv)) throw Error(ErrorCode::OutOfSupport, "s is NaN");
  const double hi = std::min(sv, s.upper);
  const double mass = dist.cdf(hi);
  if (!(mass > kSurvivalFloor) || hi <= s.lower) underflow(dist, sv, mass);
  return {s.lower, hi, std::log(mass), false};
}

QuadratureResult expect(const Distribution& dist, const Region& region, const RegionIntegrand& g,
                        const QuadratureConfig& cfg) {
  const double log_mass = region.log_mass;
  const Integrand integrand = [&](double x) {
    const double lf = dist.log_pdf(x);
    if (!(lf > kLogDensityFloor)) return 0.0;
    const double lfr = lf - log_mass;
    return std::exp(lfr) * g(x, lfr);
  };
  if (region.upper_tail && !std::isfinite(region.hi)) {
    const double mass = std::exp(log_mass);
    return integrate(integrand, region.lo, kInfinity, cfg,
                     [&](double p) { return dist.survival_quantile((1.0 - p) * mass); });
  }
  return integrate(integrand, region.lo, region.hi, cfg);
}

InfoMoments info_moments(const Distribution& dist, const Region& region,
                         const std::function<double(double)>& w, const QuadratureConfig& cfg) {
  InfoMoments m;
  const auto h = expect(dist, region, [&](double x, double lfr) { return -w(x) * lfr; }, cfg);
  m.entropy = h.value;
  m.entropy_error = h.abs_error_estimate;
  const double centre = h.value;
  const auto v = expect(
      dist, region,
      [&](double x, double lfr) {
        const double d = -w(x) * lfr - centre;
        return d * d;
      },
      cfg);
  m.variance = std::max(0.0, v.value);
  m.variance_error = v.abs_error_estimate;
  return m;
}

}  // namespace wvarent::detail
