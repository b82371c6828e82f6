#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace wvarent {

/// Weight w(x) >= 0 attached to the information content -log f(x).
class WeightFunction {
 public:
  enum class Form { Identity, Square, Affine, CubicQuad, Unit, Custom };

  static WeightFunction identity();
  static WeightFunction square();
  /// w(x) = a x + b.
  static WeightFunction affine(double a, double b);
  /// w(x) = alpha x^3 + beta x^2.
  static WeightFunction cubic_quad(double alpha, double beta);
  static WeightFunction unit();
  /// The label is required so reports can name the weight.
  static WeightFunction custom(std::function<double(double)> fn, std::string label);

  double operator()(double x) const;
  Form form() const { return form_; }
  const std::string& label() const { return label_; }
  /// The pointwise square w(x)^2.
  WeightFunction squared() const;

 private:
  WeightFunction(Form form, double c0, double c1, std::string label);

  Form form_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  std::function<double(double)> fn_;
  std::string label_;
};

/// Parses `x`, `x2`, `unit`, `affine:a,b` or `cubquad:alpha,beta`.
WeightFunction parse_weight(std::string_view text);

}  // namespace wvarent
