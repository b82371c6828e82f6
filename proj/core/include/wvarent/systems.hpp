#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wvarent/distributions.hpp"
#include "wvarent/quadrature.hpp"

namespace wvarent {

/// Distortion q of a coherent system with i.i.d. components: F_T = q(F).
///
/// Every evaluator takes the pair (u, 1 - u) so that values near u = 1 can be
/// formed from the component survival without cancellation.
class DistortionFunction {
 public:
  using PairFn = std::function<double(double u, double ubar)>;

  /// q, its complement 1 - q and q'. Throws InvalidStructure when the grid
  /// check in validate() fails.
  DistortionFunction(PairFn q, PairFn qbar, PairFn derivative, std::string label);

  /// System works while at least k of the n components work, 1 <= k <= n.
  static DistortionFunction k_out_of_n(int k, int n);
  static DistortionFunction series(int n);
  static DistortionFunction parallel(int n);
  static DistortionFunction identity();
  /// Monotone cubic through tabulated (u, q(u)) pairs covering [0, 1].
  static DistortionFunction tabulated(std::vector<double> u, std::vector<double> q,
                                     std::string label = "table");

  double operator()(double u) const { return q_(u, 1.0 - u); }
  /// System survival as a function of the component survival v: 1 - q(1 - v).
  double survival(double v) const { return qbar_(1.0 - v, v); }
  double derivative(double u) const { return dq_(u, 1.0 - u); }

  double q(double u, double ubar) const { return q_(u, ubar); }
  double qbar(double u, double ubar) const { return qbar_(u, ubar); }
  double derivative(double u, double ubar) const { return dq_(u, ubar); }
  const std::string& label() const { return label_; }

  /// q(0) = 0, q(1) = 1, q nondecreasing and finite on a 10^3-point grid.
  void validate() const;

 private:
  PairFn q_;
  PairFn qbar_;
  PairFn dq_;
  std::string label_;
};

/// series:n | parallel:n | koutofn:k,n | identity | table:path (two numeric
/// columns u,q per line; '#' comments and one header line allowed).
DistortionFunction parse_structure(const std::string& text);

/// The law of T with cdf q(F(x)).
Distribution distorted(const Distribution& component, const DistortionFunction& q);

/// phi(u) = f(x) (x log f(x))^2 and psi(u) = -x f(x) log f(x) at x = F^{-1}(u).
class PhiPsi {
 public:
  explicit PhiPsi(Distribution component) : dist_(std::move(component)) {}

  double phi(double u) const { return phi(u, 1.0 - u); }
  double psi(double u) const { return psi(u, 1.0 - u); }
  double phi(double u, double ubar) const;
  double psi(double u, double ubar) const;
  /// F^{-1}(u), read from the survival quantile when u > 1/2.
  double quantile(double u, double ubar) const;
  const Distribution& component() const { return dist_; }

 private:
  Distribution dist_;
};

/// VE^x(T) computed in u = F(x): the density of T in these coordinates is
/// q'(u) and f_T(x) = q'(F(x)) f(x), so
/// VE^x(T) = int q' (x log(q' f))^2 du - [int q' x (-log(q' f)) du]^2.
double wve_coherent(const DistortionFunction& q, const Distribution& component,
                    const QuadratureConfig& cfg = {});
/// The same value by x-space quadrature on the distorted law.
double wve_coherent_xspace(const DistortionFunction& q, const Distribution& component,
                           const QuadratureConfig& cfg = {});
/// int phi(q(u)) / f(F^{-1}(u)) du - [int psi(q(u)) / f(F^{-1}(u)) du]^2 with the
/// component phi and psi. Coincides with wve_coherent only for q(u) = u.
double wve_coherent_transcribed(const DistortionFunction& q, const Distribution& component,
                                const QuadratureConfig& cfg = {});

/// VE^x of max(X1, X2) for i.i.d. Power(k, a): the power law with shape 2k.
double closed_form_parallel2_power(double k, double a);
/// The closed form derived from the transcribed functional for q(u) = u^2.
double closed_form_parallel2_power_transcribed(double k, double a);

enum class Ordering { Greater, Less, Equal };

struct ComparisonVerdict {
  bool phi_dominates = false;   ///< phi(q(u)) >= phi(u) on the grid
  bool phi_dominated = false;   ///< phi(q(u)) <= phi(u)
  bool psi_dominates = false;   ///< psi(q(u)) >= psi(u)
  bool psi_dominated = false;   ///< psi(q(u)) <= psi(u)
  /// Set only when both directional conditions hold together.
  std::optional<Ordering> conclusion;
  double wve_system = 0.0;      ///< wve_coherent
  double wve_system_transcribed = 0.0;
  double wve_component = 0.0;
  /// Whether the claimed ordering holds numerically (true when no claim).
  bool verified = true;
  bool verified_transcribed = true;
};

/// Grid check on u in (0, 1); pointwise differences within 1e-10 count for
/// either direction.
ComparisonVerdict wve_comparison_condition(const DistortionFunction& q, const Distribution& component,
                                           const QuadratureConfig& cfg = {});

struct CoherentBounds {
  /// Grid supremum of phi(q(u)) / phi(u).
  double beta1u = 0.0;
  /// Grid points where phi(u) vanished and the ratio was skipped.
  int ratio_singular_points = 0;
  /// The largest ratio sat on the endpoint refinement rather than the grid.
  bool boundary_growth = false;
  bool envelope_holds = false;
  /// beta1u H^{w2}(X), w2 = alpha x^3 + beta x^2; present when the envelope holds.
  std::optional<double> bound_wse;
  /// beta1u [VE^x(X) + (H^x(X))^2].
  double bound_wve = 0.0;
  bool density_floor_holds = false;
  /// (1/L) int phi(q(u)) du; present when L is supplied and f >= L on the support grid.
  std::optional<double> bound_density_floor;
};

/// RatioSingularity when phi vanishes at every grid point.
CoherentBounds wve_coherent_bounds(const DistortionFunction& q, const Distribution& component,
                                   double alpha, double beta, std::optional<double> floor_l = std::nullopt,
                                   const QuadratureConfig& cfg = {});

}  // namespace wvarent
