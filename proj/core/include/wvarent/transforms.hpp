#pragma once

#include <functional>
#include <string>

#include "wvarent/distributions.hpp"
#include "wvarent/quadrature.hpp"

namespace wvarent {

/// Strictly monotone differentiable map phi with its derivative and inverse.
class MonotoneMap {
 public:
  enum class Direction { Increasing, Decreasing };
  using Fn = std::function<double(double)>;

  MonotoneMap(Fn phi, Fn derivative, Fn inverse, Direction direction, std::string label);

  static MonotoneMap identity();
  /// a x + b with a != 0; the sign of a fixes the direction.
  static MonotoneMap affine(double a, double b);
  /// x^2 on a nonnegative support.
  static MonotoneMap square();
  /// c - x.
  static MonotoneMap reflect(double c);

  double operator()(double x) const { return phi_(x); }
  double derivative(double x) const { return dphi_(x); }
  double inverse(double y) const { return inv_(y); }
  Direction direction() const { return direction_; }
  bool increasing() const { return direction_ == Direction::Increasing; }
  const std::string& label() const { return label_; }

  /// BranchMismatch when the sign of phi' on the support contradicts the
  /// declared direction (or phi' vanishes).
  void check_direction(const Distribution& dist) const;

 private:
  Fn phi_;
  Fn dphi_;
  Fn inv_;
  Direction direction_;
  std::string label_;
};

/// The law of phi(X) as a Distribution (family Derived).
Distribution transform(const Distribution& dist, const MonotoneMap& map);

/// VE^y(aX + b) from the component side:
/// VE^{w1}(X) + (a log a)^2 Var X + 2 log a (H^{w1^2}(X) - H^{w1}(X) E[aX + b]),
/// w1 = a x + b. Requires a > 0.
double wve_affine(const Distribution& dist, double a, double b, const QuadratureConfig& cfg = {});

/// VE^{ax}(aX) = a^2 {VE^x + (log a)^2 Var X - 2 log a (H^x E X + E[X^2 log f])}.
double wve_scale(const Distribution& dist, double a, const QuadratureConfig& cfg = {});

/// VE^{x+b}(X + b) = VE^x + b^2 VE + 2b (E[X log^2 f] - H^x H).
double wve_location(const Distribution& dist, double b, const QuadratureConfig& cfg = {});
/// The printed location shortcut VE^x - b VE (does not hold in general).
double wve_location_transcribed(const Distribution& dist, double b,
                                const QuadratureConfig& cfg = {});

/// VE^y(phi(X)) = VE^phi + Var[eta] - 2E[phi eta log f] - 2 H^phi E[eta], with
/// eta = phi log|phi'|; the same shape holds for both directions.
double wve_monotone(const Distribution& dist, const MonotoneMap& map,
                    const QuadratureConfig& cfg = {});
/// Decreasing maps use the printed branch with its extra squared terms;
/// increasing maps agree with wve_monotone.
double wve_monotone_transcribed(const Distribution& dist, const MonotoneMap& map,
                                const QuadratureConfig& cfg = {});

/// VE^y(Y; t) for Y = phi(X) from residual (increasing) or past (decreasing)
/// quantities of X at s = phi^{-1}(t).
double wrve_monotone(const Distribution& dist, const MonotoneMap& map, double t,
                     const QuadratureConfig& cfg = {});

/// VE^y(Y; t) for Y = aX + b, a > 0, at s = (t - b)/a:
/// VE^{w1}(X;s) + (log a)^2 Var[w1 | X > s] + 2 log a (H^{w1^2}(X;s) - H^{w1}(X;s) E[w1 | X > s]).
/// Negative b is accepted while the image support stays nonnegative.
double wrve_affine(const Distribution& dist, double a, double b, double t,
                   const QuadratureConfig& cfg = {});
/// The printed affine corollary, which is only right for a = 1.
double wrve_affine_transcribed(const Distribution& dist, double a, double b, double t,
                               const QuadratureConfig& cfg = {});

/// Direct oracles: the measure computed on the transformed law itself.
double wve_direct(const Distribution& dist, const MonotoneMap& map, const QuadratureConfig& cfg = {});
double wrve_direct(const Distribution& dist, const MonotoneMap& map, double t,
                   const QuadratureConfig& cfg = {});

}  // namespace wvarent
