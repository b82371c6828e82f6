#pragma once

#include <vector>

namespace wvarent {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes: monotone
/// data stay monotone. Outside the node range the end cubics are extended.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  /// Nodes must be strictly increasing; at least two are required.
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace wvarent
