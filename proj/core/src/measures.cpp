#include "wvarent/measures.hpp"

#include <cmath>
#include <numeric>

#include "detail/expect.hpp"
#include "wvarent/error.hpp"

namespace wvarent {

namespace {

detail::InfoMoments moments(const Distribution& dist, const WeightFunction& w,
                            const QuadratureConfig& cfg) {
  const detail::Region whole = detail::upper_region(dist, dist.support().lower);
  return detail::info_moments(dist, whole, [&](double x) { return w(x); }, cfg);
}

// Shared leading part of the power-law expression; only the last term differs
// between the corrected and the printed forms.
struct PowerParts {
  double head;
  double bracket;
};

PowerParts power_parts(double k, double b) {
  const double L = std::log(k / std::pow(b, k));
  const double lb = std::log(b);
  const double head =
      k * b * b / std::pow(k + 2.0, 3) *
      ((k + 2) * (k + 2) * L * L + 2 * (k - 1) * (k + 2) * L * ((k + 2) * lb - 1) +
       (k - 1) * (k - 1) * ((k + 2) * (k + 2) * lb * lb - 2 * ((k + 2) * lb - 1)));
  const double bracket = (k + 1) * L + (k - 1) * ((k + 1) * lb - 1);
  return {head, bracket};
}

double closed_form_simple(const Distribution& dist) {
  switch (dist.family()) {
    case Family::Uniform: {
      const double w = dist.param("b") - dist.param("a");
      const double l = std::log(w);
      return w * w * l * l / 12.0;
    }
    case Family::Exponential: {
      const double lam = dist.param("lambda");
      const double d = std::log(lam) - 4.0;
      return (d * d + 4.0) / (lam * lam);
    }
    default:
      throw Error(ErrorCode::UnsupportedFamily,
                  "no closed-form WVE for " + std::string(to_string(dist.family())));
  }
}

void check_discrete(const DiscreteModel& m) { m.validate(); }

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

MeasureValue weighted_entropy_detailed(const Distribution& dist, const WeightFunction& w,
                                       const QuadratureConfig& cfg) {
  const detail::Region whole = detail::upper_region(dist, dist.support().lower);
  const auto r = detail::expect(
      dist, whole, [&](double x, double lf) { return -w(x) * lf; }, cfg);
  return {r.value, r.abs_error_estimate};
}

MeasureValue weighted_varentropy_detailed(const Distribution& dist, const WeightFunction& w,
                                          const QuadratureConfig& cfg) {
  const auto m = moments(dist, w, cfg);
  return {m.variance, m.variance_error + 2.0 * std::abs(m.entropy) * m.entropy_error};
}

double shannon_entropy(const Distribution& dist, const QuadratureConfig& cfg) {
  return weighted_entropy(dist, WeightFunction::unit(), cfg);
}

double weighted_entropy(const Distribution& dist, const WeightFunction& w,
                        const QuadratureConfig& cfg) {
  return weighted_entropy_detailed(dist, w, cfg).value;
}

double varentropy(const Distribution& dist, const QuadratureConfig& cfg) {
  return weighted_varentropy(dist, WeightFunction::unit(), cfg);
}

double weighted_varentropy(const Distribution& dist, const WeightFunction& w,
                           const QuadratureConfig& cfg) {
  return moments(dist, w, cfg).variance;
}

double closed_form_wve(const Distribution& dist) {
  if (dist.family() == Family::Power) {
    const double k = dist.param("k");
    const PowerParts p = power_parts(k, dist.param("b"));
    const double kb = k * dist.param("b");
    return p.head - kb * kb / std::pow(k + 1.0, 4) * p.bracket * p.bracket;
  }
  return closed_form_simple(dist);
}

double closed_form_wve_transcribed(const Distribution& dist) {
  if (dist.family() == Family::Power) {
    const double k = dist.param("k");
    const PowerParts p = power_parts(k, dist.param("b"));
    const double kb = k * dist.param("b");
    return p.head + kb * kb / ((k + 1.0) * (k + 1.0)) * p.bracket * p.bracket;
  }
  return closed_form_simple(dist);
}

void DiscreteModel::validate() const {
  const std::size_t n = probs.size();
  if (n == 0) throw Error(ErrorCode::InvalidModel, "discrete model has no outcomes");
  if (outcomes.size() != n || weights.size() != n) {
    throw Error(ErrorCode::InvalidModel, "outcomes, probs and weights differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw Error(ErrorCode::InvalidModel, "probabilities must be nonnegative");
    }
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::InvalidModel, "weights must be nonnegative");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidModel, "probabilities do not sum to 1");
  }
}

double discrete_entropy(const DiscreteModel& m) {
  check_discrete(m);
  double s = 0.0;
  for (double p : m.probs) s -= plogp(p);
  return s;
}

double discrete_weighted_entropy(const DiscreteModel& m) {
  check_discrete(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m.probs.size(); ++i) s -= m.weights[i] * plogp(m.probs[i]);
  return s;
}

double discrete_varentropy(const DiscreteModel& m) {
  DiscreteModel unit = m;
  unit.weights.assign(m.probs.size(), 1.0);
  return discrete_weighted_varentropy(unit);
}

double discrete_weighted_varentropy(const DiscreteModel& m) {
  check_discrete(m);
  double second = 0.0;
  for (std::size_t i = 0; i < m.probs.size(); ++i) {
    const double p = m.probs[i];
    if (p > 0.0) {
      const double l = std::log(p);
      second += m.weights[i] * m.weights[i] * p * l * l;
    }
  }
  const double first = discrete_weighted_entropy(m);
  return second - first * first;
}

DiscreteModel varextropy_weight(const DiscreteModel& m) {
  check_discrete(m);
  DiscreteModel out = m;
  for (std::size_t i = 0; i < m.probs.size(); ++i) {
    const double p = m.probs[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCode::DegenerateProbability, "varextropy weight needs every p in (0, 1)");
    }
    out.weights[i] = -p / (2.0 * std::log(p));
  }
  return out;
}

double varextropy(const DiscreteModel& m) {
  check_discrete(m);
  double s2 = 0.0;
  double s3 = 0.0;
  for (double p : m.probs) {
    s2 += p * p;
    s3 += p * p * p;
  }
  return 0.25 * (s3 - s2 * s2);
}

bool density_envelope_holds(const Distribution& dist, double alpha, double beta) {
  constexpr int kGrid = 10000;
  const double lo = dist.quantile(1e-8);
  const double hi = dist.quantile(1.0 - 1e-8);
  for (int i = 0; i < kGrid; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / kGrid;
    const double lf = dist.log_pdf(x);
    if (lf > 0.0 || lf < -(alpha * x + beta)) return false;
  }
  return true;
}

BoundCheck wve_upper_bound(const Distribution& dist, double alpha, double beta,
                           const QuadratureConfig& cfg) {
  const WeightFunction w2 = WeightFunction::cubic_quad(alpha, beta);
  return {weighted_entropy(dist, w2, cfg), density_envelope_holds(dist, alpha, beta)};
}

}  // namespace wvarent
