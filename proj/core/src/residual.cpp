#include "wvarent/residual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/expect.hpp"
#include "detail/gauss_legendre.hpp"
#include "wvarent/error.hpp"

namespace wvarent {

namespace {

detail::InfoMoments residual_moments(const ResidualQuery& q, const QuadratureConfig& cfg) {
  const detail::Region r = detail::upper_region(q.dist, q.t);
  return detail::info_moments(q.dist, r, [&](double x) { return q.weight(x); }, cfg);
}

double exponential_wrve(double lam, double t) {
  const double u = lam * t;
  const double c = std::log(lam) + u;
  const double h = (u + 1.0) * std::log(lam) - (2.0 + u);
  return ((u * u + 2 * u + 2) * c * c - 2 * (u * u * u + 3 * u * u + 6 * u + 6) * c +
          (u * u * u * u + 4 * u * u * u + 12 * u * u + 24 * u + 24) - h * h) /
         (lam * lam);
}

double uniform_wrve(const Distribution& dist, double t) {
  const double b = dist.param("b");
  const double s = std::max(t, dist.param("a"));
  const double l = (b - s) * std::log(b - s);
  return l * l / 12.0;
}

void require_residual_t(const Distribution& dist, double t) {
  const Support s = dist.support();
  if (!(t < s.upper) || std::isnan(t)) {
    std::ostringstream msg;
    msg << "t = " << t << " leaves no residual mass for " << dist.spec();
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
}

void require_power_unit(const Distribution& dist, double t) {
  if (dist.param("b") != 1.0) {
    throw Error(ErrorCode::UnsupportedFamily, "residual power closed form requires b = 1");
  }
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::OutOfSupport, "power closed form needs t in (0, 1)");
}

struct PowerResidualParts {
  double psi;
  double lt;
  double tk;
};

PowerResidualParts power_residual_parts(double k, double t) {
  const double tk = std::pow(t, k);
  return {std::log(k / (1.0 - tk)), std::log(t), tk};
}

double dispatch_closed_form(const Distribution& dist, double t, bool transcribed) {
  require_residual_t(dist, t);
  switch (dist.family()) {
    case Family::Uniform: return uniform_wrve(dist, t);
    case Family::Exponential: return exponential_wrve(dist.param("lambda"), std::max(t, 0.0));
    case Family::Power: {
      require_power_unit(dist, t);
      const double k = dist.param("k");
      const auto [psi, lt, tk] = power_residual_parts(k, t);
      const double tk2 = std::pow(t, k + 2);
      const double tk1 = std::pow(t, k + 1);
      const double k1 = k - 1;
      const double k2 = k + 2;
      const double h_bracket = (k + 1) * psi - tk1 * ((k + 1) * psi + (k * k - 1) * lt - k1) - k1;
      if (transcribed) {
        const double a = k / (std::pow(k2, 3) * (1 - tk)) *
                         (2 * k1 * k1 - k1 * k1 * tk2 * (k2 * k2 * lt * lt - 2 * k2 * lt) +
                          2 * k1 * k2 * psi * (tk2 * (1 - k2 * lt) - 1) +
                          k2 * k2 * psi * psi * (1 - tk2));
        const double b = k * k / ((k + 1) * (k + 1) * (1 - tk) * (1 - tk)) * h_bracket * h_bracket;
        return a - b;
      }
      const double a = k / (std::pow(k2, 3) * (1 - tk)) *
                       (psi * psi * k2 * k2 * (1 - tk2) -
                        2 * psi * k1 * k2 * (1 - tk2 * (1 - k2 * lt)) +
                        k1 * k1 * (2 - tk2 * (k2 * k2 * lt * lt - 2 * k2 * lt + 2)));
      const double h = k / ((k + 1) * (k + 1) * (1 - tk)) * h_bracket;
      return a - h * h;
    }
    default:
      throw Error(ErrorCode::UnsupportedFamily,
                  "no closed-form WRVE for " + std::string(to_string(dist.family())));
  }
}

QuadratureConfig tightened(QuadratureConfig cfg) {
  cfg.rel_tol = std::min(cfg.rel_tol, 1e-12);
  cfg.abs_tol = std::min(cfg.abs_tol, 1e-15);
  cfg.max_subdivisions = std::max(cfg.max_subdivisions, 4000);
  return cfg;
}

}  // namespace

void ResidualQuery::validate() const { (void)detail::upper_region(dist, t); }

MeasureValue wrse_detailed(const ResidualQuery& q, const QuadratureConfig& cfg) {
  const detail::Region r = detail::upper_region(q.dist, q.t);
  const auto v = detail::expect(
      q.dist, r, [&](double x, double lfr) { return -q.weight(x) * lfr; }, cfg);
  return {v.value, v.abs_error_estimate};
}

double wrse(const ResidualQuery& q, const QuadratureConfig& cfg) {
  return wrse_detailed(q, cfg).value;
}

MeasureValue wrve_detailed(const ResidualQuery& q, const QuadratureConfig& cfg) {
  const auto m = residual_moments(q, cfg);
  return {m.variance, m.variance_error + 2.0 * std::abs(m.entropy) * m.entropy_error};
}

double wrve(const ResidualQuery& q, const QuadratureConfig& cfg) {
  return residual_moments(q, cfg).variance;
}

double wrve_decomposed(const ResidualQuery& q, const QuadratureConfig& cfg) {
  const detail::Region r = detail::upper_region(q.dist, q.t);
  const double lambda = -r.log_mass;
  // Raw log f here (log_fr + log_mass), unlike the centred route.
  const auto raw = [&](double lfr) { return lfr + r.log_mass; };
  const double m_ll = detail::expect(q.dist, r, [&](double x, double lfr) {
                        const double w = q.weight(x);
                        const double lf = raw(lfr);
                        return w * w * lf * lf;
                      }, cfg).value;
  const double m_w2 = detail::expect(q.dist, r, [&](double x, double) {
                        const double w = q.weight(x);
                        return w * w;
                      }, cfg).value;
  const double h_w2 = detail::expect(q.dist, r, [&](double x, double lfr) {
                        const double w = q.weight(x);
                        return -w * w * lfr;
                      }, cfg).value;
  const double h_w = wrse(q, cfg);
  return m_ll - lambda * lambda * m_w2 - 2.0 * lambda * h_w2 - h_w * h_w;
}

double rve(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  return wrve({dist, t, WeightFunction::unit()}, cfg);
}

double closed_form_wrve(const Distribution& dist, double t) {
  return dispatch_closed_form(dist, t, false);
}

double closed_form_wrve_transcribed(const Distribution& dist, double t) {
  return dispatch_closed_form(dist, t, true);
}

DerivativeReport wrve_derivative(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  const double r = dist.hazard(t);
  if (!(r > 0.0) || !std::isfinite(r)) {
    std::ostringstream msg;
    msg << "hazard rate at t = " << t << " is " << r;
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
  const QuadratureConfig fine = tightened(cfg);
  const ResidualQuery q{dist, t, WeightFunction::identity()};
  const auto m = residual_moments(q, fine);
  const double ve = m.variance;
  const double h = m.entropy;
  const double h_star = wrse({dist, t, WeightFunction::square()}, fine);
  const double v = moment_conditional(dist, 1, t, fine);
  const double tail = h + t * std::log(r);

  DerivativeReport out;
  const double printed_inner = h * v + h_star;
  out.formula_value = r * (ve - 2.0 * printed_inner * printed_inner - tail * tail);
  out.corrected_value = r * (ve - 2.0 * (h_star - h * v) - tail * tail);

  const double step = std::max(1e-5, 1e-5 * t);
  const double lower = dist.support().lower;
  if (t - step > lower) {
    const double up = wrve({dist, t + step, q.weight}, fine);
    const double dn = wrve({dist, t - step, q.weight}, fine);
    out.finite_difference_value = (up - dn) / (2.0 * step);
  } else {
    const double up1 = wrve({dist, t + step, q.weight}, fine);
    const double up2 = wrve({dist, t + 2 * step, q.weight}, fine);
    out.finite_difference_value = (-3.0 * ve + 4.0 * up1 - up2) / (2.0 * step);
  }
  return out;
}

BoundCheck wrve_upper_bound(const Distribution& dist, double t, double alpha, double beta,
                            const QuadratureConfig& cfg) {
  const WeightFunction w2 = WeightFunction::cubic_quad(alpha, beta);
  const double h = wrse({dist, t, w2}, cfg);
  const double lambda = dist.cumhazard(std::max(t, dist.support().lower));
  const double m2 = moment_conditional(dist, 2, t, cfg);
  return {h + lambda * lambda * m2, density_envelope_holds(dist, alpha, beta)};
}

EtaFunction EtaFunction::build(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  const detail::Region region = detail::upper_region(dist, t);
  const double mass = std::exp(region.log_mass);
  const double lo = region.lo;

  EtaFunction eta;
  eta.t_ = t;
  eta.mean_ = moment_conditional(dist, 1, t, cfg);
  eta.variance_ = vrl(dist, t, cfg);
  if (!(eta.variance_ > 0.0)) {
    throw Error(ErrorCode::EtaSingularity, "residual variance vanishes");
  }

  // Nodes between the 1e-8 and 1 - 1e-8 residual quantiles, log-spaced in x - lo.
  const double first = dist.survival_quantile(mass * (1.0 - 1e-8));
  const double last = dist.survival_quantile(mass * 1e-8);
  const double d0 = std::max(first - lo, (last - lo) * 1e-12);
  const double d1 = last - lo;
  if (!(d1 > d0)) throw Error(ErrorCode::EtaSingularity, "residual law has no spread");
  const int n_nodes = kNodes;
  std::vector<double> x(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    x[i] = lo + d0 * std::pow(d1 / d0, static_cast<double>(i) / (n_nodes - 1));
  }

  const double mu = eta.mean_;
  const double log_mass = region.log_mass;
  const auto ft = [&](double u) {
    const double lf = dist.log_pdf(u);
    return lf > std::log(detail::kDensityFloor) ? std::exp(lf - log_mass) : 0.0;
  };
  const Integrand left_kernel = [&](double u) { return (mu - u) * ft(u); };
  const Integrand right_kernel = [&](double u) { return (u - mu) * ft(u); };

  std::vector<double> left(n_nodes);
  std::vector<double> right(n_nodes);
  left[0] = integrate(left_kernel, lo, x[0], cfg).value;
  for (int i = 1; i < n_nodes; ++i) left[i] = left[i - 1] + integrate(left_kernel, x[i - 1], x[i], cfg).value;
  if (std::isfinite(region.hi)) {
    right[n_nodes - 1] = integrate(right_kernel, x[n_nodes - 1], region.hi, cfg).value;
  } else {
    right[n_nodes - 1] = integrate(right_kernel, x[n_nodes - 1], kInfinity, cfg, [&](double p) {
                          return dist.survival_quantile((1.0 - p) * mass * 1e-8);
                        }).value;
  }
  for (int i = n_nodes - 2; i >= 0; --i) right[i] = right[i + 1] + integrate(right_kernel, x[i], x[i + 1], cfg).value;

  std::vector<double> values(n_nodes);
  eta.integrals_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double integral = x[i] <= mu ? left[i] : right[i];
    const double f = ft(x[i]);
    if (!(f > 0.0)) {
      std::ostringstream msg;
      msg << "residual density underflows at x = " << x[i];
      throw Error(ErrorCode::EtaSingularity, msg.str());
    }
    eta.integrals_[i] = integral;
    values[i] = integral / (eta.variance_ * f);
    if (!std::isfinite(values[i])) throw Error(ErrorCode::EtaSingularity, "eta is not finite");
  }
  eta.curve_ = MonotoneCubic(x, values);
  return eta;
}

namespace {
// Central difference of log f, with the step kept inside the support.
double dlog_pdf(const Distribution& dist, double x) {
  const Support s = dist.support();
  double h = 1e-6 * std::max(1.0, std::abs(x));
  h = std::min({h, 0.5 * (x - s.lower), 0.5 * (s.upper - x)});
  return (dist.log_pdf(x + h) - dist.log_pdf(x - h)) / (2.0 * h);
}
}  // namespace

double wrve_lower_bound(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  const EtaFunction eta = EtaFunction::build(dist, t, cfg);
  const double log_mass = detail::upper_region(dist, t).log_mass;
  // sigma^2 (eta f)' = (mu - x) f turns E[Z eta'(Z)] into
  // -1 - E[Z eta(Z) (log f)'(Z)], so 1 + E[-eta log f_t] + E[Z eta'] needs
  // only values of eta. Integrated panel by panel between nodes.
  double s = 0.0;
  const auto& x = eta.nodes();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    detail::gauss_legendre_panel(x[i], x[i + 1], [&](double u, double w) {
      const double lf = dist.log_pdf(u);
      if (!(lf > std::log(detail::kDensityFloor))) return;
      const double lfr = lf - log_mass;
      s += w * std::exp(lfr) * eta(u) * (-lfr - u * dlog_pdf(dist, u));
    });
  }
  return eta.variance() * s * s;
}

}  // namespace wvarent
