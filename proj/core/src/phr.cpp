#include "wvarent/phr.hpp"

#include <cmath>
#include <sstream>

#include "detail/expect.hpp"
#include "wvarent/error.hpp"
#include "wvarent/format.hpp"

namespace wvarent {

namespace {

class PHRLaw final : public DistributionModel {
 public:
  PHRLaw(Distribution base, double a) : base_(std::move(base)), a_(a) {}

  std::string spec() const override { return "phr(a=" + format_number(a_) + ")[" + base_.spec() + "]"; }
  Support support() const override { return base_.support(); }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return std::log(a_) + (a_ - 1.0) * base_.log_sf(x) + base_.log_pdf(x);
  }
  double cdf(double x) const override { return -std::expm1(log_sf(x)); }
  double sf(double x) const override { return std::exp(log_sf(x)); }
  double log_sf(double x) const override { return a_ * base_.log_sf(x); }
  double quantile(double p) const override { return survival_quantile(1.0 - p); }
  double survival_quantile(double s) const override {
    if (s <= 0.0) return support().upper;
    if (s >= 1.0) return support().lower;
    return base_.survival_quantile(std::exp(std::log(s) / a_));
  }

 private:
  Distribution base_;
  double a_;
};

// log y with y in (0, sf(t)^a]; OutOfSupport outside.
double checked_log_y(const PHRModel& m, double y, double t) {
  const double log_top = m.a * m.baseline.log_sf(t);
  const double ly = std::log(y);
  if (!(y > 0.0) || ly > log_top + 1e-12) {
    std::ostringstream msg;
    msg << "y = " << y << " outside (0, sf(t)^a] at t = " << t;
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
  return ly;
}

// gamma at y = sf(t)^a * s, built from logs so tiny survivals stay exact.
double gamma_scaled(const PHRModel& m, double log_top, double s) {
  const double ly = log_top + std::log(s);
  const double x = m.baseline.survival_quantile(std::exp(ly / m.a));
  const double lf = m.baseline.log_pdf(x);
  const double lgt = std::log(m.a) + (1.0 - 1.0 / m.a) * ly + lf - log_top;
  if (!(lf + std::log(m.a) + (1.0 - 1.0 / m.a) * ly > std::log(detail::kDensityFloor))) return 0.0;
  return x * lgt;
}

struct YMoments {
  double mean;
  double variance;
};

YMoments y_moments(const PHRModel& m, double t, const QuadratureConfig& cfg) {
  m.validate();
  const double log_top = m.a * m.baseline.log_sf(std::max(t, m.baseline.support().lower));
  if (!(log_top > std::log(kSurvivalFloor))) {
    throw Error(ErrorCode::TailUnderflow, "sf(t)^a underflows at t = " + format_number(t));
  }
  // (1/Y0) int_0^Y0 h(y) dy = int_0^1 h(Y0 s) ds.
  const double mean = integrate([&](double s) { return gamma_scaled(m, log_top, s); }, 0.0, 1.0, cfg).value;
  const double var = integrate([&](double s) {
                       const double d = gamma_scaled(m, log_top, s) - mean;
                       return d * d;
                     }, 0.0, 1.0, cfg).value;
  return {mean, var};
}

}  // namespace

void PHRModel::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::DegenerateParameter, "PHR constant a must be positive");
  }
}

Distribution PHRModel::law() const {
  validate();
  return Distribution(std::make_shared<PHRLaw>(baseline, a));
}

double gamma_fn(const PHRModel& model, double y, double t) {
  model.validate();
  const double ly = checked_log_y(model, y, t);
  const double x = model.baseline.survival_quantile(std::exp(ly / model.a));
  const double log_top = model.a * model.baseline.log_sf(t);
  return x * (std::log(model.a) + (1.0 - 1.0 / model.a) * ly + model.baseline.log_pdf(x) - log_top);
}

double gamma_fn_hazard(const PHRModel& model, double y, double t) {
  model.validate();
  const double ly = checked_log_y(model, y, t);
  const double x = model.baseline.cumhazard_inverse(-ly / model.a);
  return x * (std::log(model.a) + ly + model.a * model.baseline.cumhazard(t) + std::log(model.baseline.hazard(x)));
}

double wrse_phr(const PHRModel& model, double t, const QuadratureConfig& cfg) {
  return -y_moments(model, t, cfg).mean;
}

double wrve_phr(const PHRModel& model, double t, const QuadratureConfig& cfg) {
  return y_moments(model, t, cfg).variance;
}

double exponential_gamma(double a, double lambda, double t, double y) {
  const double c = a * lambda;
  const double ly = std::log(y);
  return -(1.0 / c) * ((c * t + std::log(c)) * ly + ly * ly);
}

double series_exponential_wrve(double a, double lambda, double t) {
  if (!(a > 0.0) || !(lambda > 0.0) || !(t >= 0.0)) {
    throw Error(ErrorCode::DegenerateParameter, "need a > 0, lambda > 0 and t >= 0");
  }
  const double c = a * lambda;
  const double u = c * t;
  const double l = u + std::log(c);
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double second = l * l * (u2 + 2.0 * u + 2.0) - 2.0 * l * (u3 + 3.0 * u2 + 6.0 * u + 6.0) + u2 * u2 +
                        4.0 * u3 + 12.0 * u2 + 24.0 * u + 24.0;
  const double first = (1.0 + u) * l - (u + 1.0) * (u + 1.0) - 1.0;
  return (second - first * first) / (c * c);
}

}  // namespace wvarent
