#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracle.hpp"

TEST_CASE("oracle integrates known closed forms") {
  CHECK(oracle::tanh_sinh([](double) { return 1.0; }, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(oracle::tanh_sinh([](double x) { return x * std::log(x) * std::log(x); }, 0, 1) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(oracle::exp_sinh([](double x) { return std::exp(-x); }, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::exp_sinh([](double x) { return 1.0 / (1.0 + x * x); }, 0) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-11));
}

TEST_CASE("oracle weighted varentropy of Exponential(1) is 20") {
  const double v = oracle::wve([](double x) { return std::exp(-x); }, 0, INFINITY);
  CHECK(v == doctest::Approx(20.0).epsilon(1e-11));
}
