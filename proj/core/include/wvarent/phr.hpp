#pragma once

#include "wvarent/distributions.hpp"
#include "wvarent/quadrature.hpp"

namespace wvarent {

/// Proportional hazard rate model: the survival of Y is sf(x)^a for a
/// baseline sf; a = n is the lifetime of an n-component series system.
struct PHRModel {
  Distribution baseline;
  double a = 1.0;

  /// DegenerateParameter unless a is positive and finite.
  void validate() const;
  /// The law of Y as a Distribution.
  Distribution law() const;
};

/// gamma(y : a, t) = x log{a y^(1 - 1/a) f(x) / sf(t)^a} at x = sf^{-1}(y^(1/a)),
/// i.e. x log g_t(x) for the residual density g_t of Y.
/// y must lie in (0, sf(t)^a]; OutOfSupport otherwise.
double gamma_fn(const PHRModel& model, double y, double t);
/// The hazard form x log{a y e^{a Lambda(t)} r(x)} at x = Lambda^{-1}(-log(y) / a).
double gamma_fn_hazard(const PHRModel& model, double y, double t);

/// WRSE of Y through the y-substitution. The normalized y-integral of gamma is
/// E[X log g_t(X)], so it is negated to match wrse.
double wrse_phr(const PHRModel& model, double t, const QuadratureConfig& cfg = {});
/// WRVE of Y as the centred normalized y-integral of gamma.
double wrve_phr(const PHRModel& model, double t, const QuadratureConfig& cfg = {});

/// gamma for an exponential(lambda) baseline:
/// -(1 / (a lambda)) [(a lambda t + log(a lambda)) log y + (log y)^2].
double exponential_gamma(double a, double lambda, double t, double y);

/// Closed-form WRVE of a series system of n i.i.d. exponential(lambda)
/// components (a may be any positive real).
double series_exponential_wrve(double a, double lambda, double t);

}  // namespace wvarent
