#pragma once

#include <vector>

#include "wvarent/distributions.hpp"
#include "wvarent/quadrature.hpp"
#include "wvarent/weight.hpp"

namespace wvarent {

/// A quadrature-backed value together with its error estimate.
struct MeasureValue {
  double value = 0.0;
  double quadrature_error = 0.0;
};

/// H(X) = -E[log f(X)].
double shannon_entropy(const Distribution& dist, const QuadratureConfig& cfg = {});
/// H^w(X) = -E[w(X) log f(X)].
double weighted_entropy(const Distribution& dist, const WeightFunction& w,
                        const QuadratureConfig& cfg = {});
/// VE(X) = Var[-log f(X)].
double varentropy(const Distribution& dist, const QuadratureConfig& cfg = {});
/// VE^w(X) = Var[-w(X) log f(X)].
double weighted_varentropy(const Distribution& dist, const WeightFunction& w,
                           const QuadratureConfig& cfg = {});

MeasureValue weighted_entropy_detailed(const Distribution& dist, const WeightFunction& w,
                                       const QuadratureConfig& cfg = {});
MeasureValue weighted_varentropy_detailed(const Distribution& dist, const WeightFunction& w,
                                          const QuadratureConfig& cfg = {});

/// Closed-form VE^x for Uniform, Exponential and Power laws.
/// UnsupportedFamily otherwise.
double closed_form_wve(const Distribution& dist);
/// The power-law expression exactly as printed in the source, which carries a
/// sign and exponent slip in its last term. Other families match
/// closed_form_wve.
double closed_form_wve_transcribed(const Distribution& dist);

// Discrete measures.

struct DiscreteModel {
  std::vector<double> outcomes;
  std::vector<double> probs;
  std::vector<double> weights;

  /// InvalidModel unless lengths agree, probs are a distribution (sum within
  /// 1e-12) and weights are nonnegative.
  void validate() const;
};

/// S(X) = -sum p log p with 0 log 0 = 0.
double discrete_entropy(const DiscreteModel& m);
/// S^w(X) = -sum w p log p.
double discrete_weighted_entropy(const DiscreteModel& m);
double discrete_varentropy(const DiscreteModel& m);
double discrete_weighted_varentropy(const DiscreteModel& m);

/// Copy of m with weights -p / (2 log p). DegenerateProbability if some p is 0 or 1.
DiscreteModel varextropy_weight(const DiscreteModel& m);
/// (1/4)[sum p^3 - (sum p^2)^2].
double varextropy(const DiscreteModel& m);

struct BoundCheck {
  double bound = 0.0;
  /// Whether exp(-(alpha x + beta)) <= f(x) <= 1 held on the check grid.
  bool condition_holds = false;
};

/// Grid check of exp(-(alpha x + beta)) <= f(x) <= 1 on 10^4 points spanning
/// [quantile(1e-8), quantile(1 - 1e-8)].
bool density_envelope_holds(const Distribution& dist, double alpha, double beta);

/// H^{w2}(X) with w2 = alpha x^3 + beta x^2; bounds VE^x(X) when the
/// envelope condition holds.
BoundCheck wve_upper_bound(const Distribution& dist, double alpha, double beta,
                           const QuadratureConfig& cfg = {});

}  // namespace wvarent
