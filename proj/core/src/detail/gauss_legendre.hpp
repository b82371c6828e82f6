#pragma once

namespace wvarent::detail {

// 10-point Gauss-Legendre on [-1, 1], symmetric half.
inline constexpr double kGlNode[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                      0.8650633666889845, 0.9739065285171717};
inline constexpr double kGlWeight[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                        0.1494513491505806, 0.0666713443086881};

/// Calls fn(x, w) at the 10 nodes of [a, b].
template <class Fn>
void gauss_legendre_panel(double a, double b, Fn&& fn) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < 5; ++k) {
    const double dx = half * kGlNode[k];
    const double w = half * kGlWeight[k];
    fn(mid - dx, w);
    fn(mid + dx, w);
  }
}

}  // namespace wvarent::detail
