#include "wvarent/erratum.hpp"

#include <cmath>
#include <limits>

#include "detail/expect.hpp"
#include "wvarent/distributions.hpp"
#include "wvarent/error.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/phr.hpp"
#include "wvarent/residual.hpp"
#include "wvarent/systems.hpp"
#include "wvarent/transforms.hpp"

namespace wvarent {

namespace {

ErratumEntry entry(std::string id, std::string description, double printed, double oracle, double rel_tol) {
  ErratumEntry e{std::move(id), std::move(description), printed, oracle, 0.0, 0.0, false};
  e.abs_diff = std::abs(printed - oracle);
  e.tolerance = rel_tol * std::max(1.0, std::abs(oracle));
  e.consistent = std::isfinite(oracle) && e.abs_diff <= e.tolerance;
  if (!std::isfinite(oracle)) e.abs_diff = std::numeric_limits<double>::infinity();
  return e;
}

DiscreteModel three_point(double p1, double p2, double p3) { return {{1, 2, 3}, {p1, p2, p3}, {1, 2, 3}}; }

// Printed closed form for Pareto-I(1, 2) shifted by b, residual at t.
double pareto_shift_printed(double t, double b) {
  const double l3 = std::log(3.0 * std::pow(t + b, 3));
  const double l = std::log(t + b);
  const double q = 3 * t * t + 3 * b * t + b * b;
  const double lead = 2 * (3 * t + b) * l + 0.5 * (3 * t + b) * l3 + (3 * t + 5 * b / 3);
  return l3 * (q * std::log(3 * (t + b)) + 8.0 / 3.0 * (9 * t * t + 9 * b * t + b * b)) + 16 * q * l * l +
         16.0 / 3.0 * (18 * t * t + 27 * t * b + 11 * b * b) * l - lead * lead +
         8.0 / 9.0 * (108 * t * t + 189 * t * b + 83 * b * b) - 8 * l3 * l * q;
}

// Printed WRVE of Y = X^2, X ~ Exponential(lambda), at t; the conditional
// expectations it references are evaluated by quadrature.
double square_exponential_printed(double lambda, double t, const QuadratureConfig& cfg) {
  const Distribution x = Distribution::exponential(lambda);
  const double st = std::sqrt(t);
  const double ll = std::log(lambda);
  const detail::Region r = detail::upper_region(x, st);
  auto e = [&](auto g) { return detail::expect(x, r, [&](double v, double) { return g(v); }, cfg).value; };
  const double e1 = e([](double v) { return v * v * std::log(2 * v); });
  const double v1 = e([](double v) { const double z = v * v * std::log(2 * v); return z * z; }) - e1 * e1;
  const double e2 = e([&](double v) { return std::pow(v, 4) * std::log(2 * v) * (ll - lambda * v + lambda * st); });
  const double a = (ll + lambda * st - 3) * (t + 2 * st / lambda + 2 / (lambda * lambda)) - lambda * t * st;
  const double l4 = std::pow(lambda, 4);
  return 12 / lambda * std::pow(ll + lambda * st - 5, 2) +
         2 * lambda * t * st * (3 - ll - lambda * st) * (t + 5 / lambda * st + 20 / (lambda * lambda)) - a * a + v1 -
         2 * a * e1 + std::pow(ll + lambda * st, 2) * (t * t + 4 * t * st / lambda) +
         60 / l4 * std::pow(1 + lambda * st, 2) + (lambda * lambda * t * t * t + 60 / l4) - 2 * e2;
}

}  // namespace

std::vector<ErratumEntry> erratum_report(const QuadratureConfig& cfg) {
  std::vector<ErratumEntry> out;
  const WeightFunction x = WeightFunction::identity();

  out.push_back(entry("discrete-wve-pq", "discrete WVE, p=(0.5,0.2,0.3), w=x: printed digits vs exact sum",
                      1.92508326678, discrete_weighted_varentropy(three_point(0.5, 0.2, 0.3)), 1e-9));
  out.push_back(entry("discrete-wve-qp", "discrete WVE, p=(0.3,0.2,0.5), w=x: printed digits vs exact sum",
                      0.48838794637, discrete_weighted_varentropy(three_point(0.3, 0.2, 0.5)), 1e-9));
  out.push_back(entry("discrete-ve", "discrete varentropy, both orderings",
                      0.13296441046, discrete_varentropy(three_point(0.5, 0.2, 0.3)), 1e-9));

  {
    const Distribution p = Distribution::power(3.0, 1.5);
    out.push_back(entry("power-wve", "power(k=3,b=1.5) WVE closed form: last term carries (k+1)^2 instead of (k+1)^4 and + instead of -",
                        closed_form_wve_transcribed(p), weighted_varentropy(p, x, cfg), 1e-6));
  }
  {
    const Distribution p = Distribution::power(2.0, 1.0);
    out.push_back(entry("power-wrve", "power(k=2,b=1) WRVE at t=0.5: same exponent slip plus a missing +2 in the (k-1)^2 bracket",
                        closed_form_wrve_transcribed(p, 0.5), wrve({p, 0.5, x}, cfg), 1e-6));
  }
  {
    const Distribution e = Distribution::exponential(1.0);
    out.push_back(entry("wrse-sign", "WRSE written without the leading minus: exp(1), t=1",
                        -wrse({e, 1.0, x}, cfg), wrse({e, 1.0, x}, cfg), 1e-6));
    out.push_back(entry("location-shift", "VE^{x+b}(X+b) = VE^x - b VE: exp(1), b=1",
                        wve_location_transcribed(e, 1.0, cfg), wve_direct(e, MonotoneMap::affine(1.0, 1.0), cfg), 1e-6));
  }
  {
    const Distribution p = Distribution::power(2.0, 1.0);
    const MonotoneMap m = MonotoneMap::reflect(2.0);
    out.push_back(entry("monotone-decreasing", "decreasing-map WVE identity: power(2,1), Y = 2 - X",
                        wve_monotone_transcribed(p, m, cfg), wve_direct(p, m, cfg), 1e-6));
  }
  {
    const Distribution e = Distribution::exponential(1.0);
    const DerivativeReport d = wrve_derivative(e, 1.0, cfg);
    out.push_back(entry("wrve-derivative", "d/dt WRVE identity: exp(1), t=1, vs central difference",
                        d.formula_value, d.finite_difference_value, 1e-4));
    out.push_back(entry("affine-residual", "affine residual corollary: exp(1), a=2, b=1, t=2",
                        wrve_affine_transcribed(e, 2.0, 1.0, 2.0, cfg),
                        wrve_direct(e, MonotoneMap::affine(2.0, 1.0), 2.0, cfg), 1e-6));
  }
  {
    double oracle = std::numeric_limits<double>::infinity();
    try {
      oracle = wrve_direct(Distribution::pareto1(1.0, 2.0), MonotoneMap::affine(1.0, -0.5), 1.0, cfg);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NonConvergence && err.code() != ErrorCode::NonfiniteMoment) throw;
    }
    out.push_back(entry("pareto-shift", "pareto-I(1,2) shifted by b=0.5, t=1: printed finite value, x^2 (log f)^2 moment diverges",
                        pareto_shift_printed(1.0, 0.5), oracle, 1e-6));
  }
  {
    const Distribution e = Distribution::exponential(1.0);
    out.push_back(entry("square-exponential", "WRVE of X^2, X ~ exp(1), t=1",
                        square_exponential_printed(1.0, 1.0, cfg), wrve_direct(e, MonotoneMap::square(), 1.0, cfg), 1e-6));
  }
  {
    const DistortionFunction q = DistortionFunction::parallel(2);
    const Distribution p = Distribution::power(1.0, 1.0);
    out.push_back(entry("coherent-uspace", "coherent WVE u-space line with component phi, psi: power(1,1), q=u^2",
                        wve_coherent_transcribed(q, p, cfg), wve_coherent(q, p, cfg), 1e-6));
    out.push_back(entry("parallel2-power", "parallel-2 power(k=2,a=1) closed form vs true system WVE",
                        closed_form_parallel2_power_transcribed(2.0, 1.0),
                        wve_coherent(q, Distribution::power(2.0, 1.0), cfg), 1e-6));
  }
  {
    const PHRModel m{Distribution::exponential(1.0), 2.0};
    const double t = 0.5;
    const double y_form = -wrse_phr(m, t, cfg);  // the normalized y-integral itself
    out.push_back(entry("phr-wrse-sign", "PHR WRSE as the normalized y-integral of gamma: exp(1), a=2, t=0.5",
                        y_form, wrse({m.law(), t, x}, cfg), 1e-6));
    out.push_back(entry("phr-series-exponential", "series exponential closed form: a=2, lambda=1, t=0.5",
                        series_exponential_wrve(2.0, 1.0, t), wrve({Distribution::exponential(2.0), t, x}, cfg), 1e-6));
  }
  return out;
}

}  // namespace wvarent
