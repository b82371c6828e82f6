#pragma once

#include "wvarent/distributions.hpp"
#include "wvarent/interpolation.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/weight.hpp"

namespace wvarent {

/// The residual law [X | X > t] together with the weight of interest.
struct ResidualQuery {
  Distribution dist;
  double t = 0.0;
  WeightFunction weight = WeightFunction::identity();

  /// TailUnderflow when sf(t) is below the survival floor.
  void validate() const;
};

/// Weighted residual Shannon entropy -E[w(X) log f_t(X) | X > t], with the
/// leading minus sign so that t -> lower support recovers weighted_entropy.
double wrse(const ResidualQuery& q, const QuadratureConfig& cfg = {});
MeasureValue wrse_detailed(const ResidualQuery& q, const QuadratureConfig& cfg = {});

/// Weighted residual varentropy Var[-w(X) log f_t(X) | X > t], computed as a
/// centred second moment.
double wrve(const ResidualQuery& q, const QuadratureConfig& cfg = {});
MeasureValue wrve_detailed(const ResidualQuery& q, const QuadratureConfig& cfg = {});

/// The same quantity through the cumulative-hazard decomposition
/// E[w^2 log^2 f] / sf - Lambda^2 E[w^2] - 2 Lambda H^{w^2} - (H^w)^2.
double wrve_decomposed(const ResidualQuery& q, const QuadratureConfig& cfg = {});

/// Unweighted residual varentropy.
double rve(const Distribution& dist, double t, const QuadratureConfig& cfg = {});

/// Closed-form VE^x(X; t) for Uniform, Exponential and Power with b = 1.
/// UnsupportedFamily otherwise; OutOfSupport when t leaves the support.
double closed_form_wrve(const Distribution& dist, double t);
/// The power-law expression as printed (missing a constant and carrying the
/// wrong exponent on its squared term); other families match closed_form_wrve.
double closed_form_wrve_transcribed(const Distribution& dist, double t);

struct DerivativeReport {
  /// d/dt VE^x(X;t) from the derivative identity exactly as printed.
  double formula_value = 0.0;
  /// r(t){VE - 2(H^{x^2} - H v) - (H + t log r)^2}, rederived.
  double corrected_value = 0.0;
  /// Central difference of wrve with h = max(1e-5, 1e-5 t).
  double finite_difference_value = 0.0;
};

/// Identity weight only. Requires r(t) > 0.
DerivativeReport wrve_derivative(const Distribution& dist, double t,
                                 const QuadratureConfig& cfg = {});

/// H^{w2}(X;t) + Lambda(t)^2 E[X^2 | X > t] with w2 = alpha x^3 + beta x^2,
/// plus the envelope check exp(-(alpha x + beta)) <= f(x) <= 1.
BoundCheck wrve_upper_bound(const Distribution& dist, double t, double alpha, double beta,
                            const QuadratureConfig& cfg = {});

/// Tabulated solution of sigma^2 eta(x) f_t(x) = int (v(t) - u) f_t(u) du over
/// the residual law Z = [X | X > t] with mean v(t) and variance sigma^2(t).
class EtaFunction {
 public:
  static constexpr int kNodes = 2048;

  /// EtaSingularity when f_t underflows at a node.
  static EtaFunction build(const Distribution& dist, double t, const QuadratureConfig& cfg = {});

  double t() const { return t_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double lower() const { return curve_.nodes().front(); }
  double upper() const { return curve_.nodes().back(); }
  double operator()(double x) const { return curve_.value(x); }
  double derivative(double x) const { return curve_.derivative(x); }
  /// The defining integral at node i, for checking the relation.
  double integral_at(std::size_t i) const { return integrals_.at(i); }
  const std::vector<double>& nodes() const { return curve_.nodes(); }

 private:
  double t_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
  MonotoneCubic curve_;
  std::vector<double> integrals_;
};

/// sigma^2(t) {1 + E[-eta_t(Z) log f_t(Z)] + E[Z eta_t'(Z)]}^2 <= VE^x(X;t).
double wrve_lower_bound(const Distribution& dist, double t, const QuadratureConfig& cfg = {});

}  // namespace wvarent
