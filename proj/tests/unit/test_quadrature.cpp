#include <cmath>

#include "doctest.h"
#include "wvarent/error.hpp"
#include "wvarent/quadrature.hpp"

using namespace wvarent;

TEST_CASE("integrate: unit box and total probability") {
  CHECK(integrate([](double) { return 1.0; }, 0, 1).value == doctest::Approx(1.0).epsilon(1e-14));
  const auto r = integrate([](double x) { return std::exp(-x); }, 0, kInfinity, {},
                           [](double p) { return -std::log1p(-p); });
  CHECK(std::abs(r.value - 1.0) < 1e-9);
  CHECK(r.truncated_at.has_value());
}

TEST_CASE("integrate: endpoint log singularity") {
  const auto r = integrate([](double x) { return x * std::log(x) * std::log(x); }, 0, 1);
  CHECK(std::abs(r.value - 0.25) < 1e-8);
  CHECK(r.abs_error_estimate >= 0.0);
}

TEST_CASE("integrate: nodes stay strictly inside the interval") {
  bool touched = false;
  integrate([&](double x) { touched = touched || x <= 0.0 || x >= 1.0; return std::log(x) * std::log1p(-x); }, 0, 1);
  CHECK_FALSE(touched);
}

TEST_CASE("integrate: divergent tail raises NonConvergence") {
  try {
    integrate([](double x) { return 1.0 / (1.0 + x); }, 0, kInfinity);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
}

TEST_CASE("integrate: non-finite integrand is reported") {
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0, 1), Error);
}

TEST_CASE("QuadratureConfig::validate rejects nonsense") {
  QuadratureConfig c;
  c.rel_tol = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.tail_mass = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.max_subdivisions = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}
