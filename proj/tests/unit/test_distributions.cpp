#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "wvarent/distributions.hpp"
#include "wvarent/error.hpp"

using namespace wvarent;

namespace {
ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}
}  // namespace

TEST_CASE("basic evaluations") {
  CHECK(Distribution::exponential(1).pdf(0) == doctest::Approx(1.0));
  CHECK(Distribution::uniform(0, 1).cdf(0.5) == doctest::Approx(0.5));
  CHECK(Distribution::exponential(5.5).sf(0.1) == doctest::Approx(std::exp(-0.55)).epsilon(1e-14));
}

TEST_CASE("quantile inverts cdf for every family") {
  const std::vector<Distribution> ds = {
      Distribution::uniform(1, 3),        Distribution::exponential(2.5),   Distribution::power(2, 1.5),
      Distribution::pareto1(3, 2),        Distribution::lomax(2, 1),        Distribution::weibull(2),
      Distribution::burr3(1.202347, 4.701481), Distribution::logistic_exponential(2.4719, 1.7619),
      Distribution::log_uniform(1, 3)};
  for (const auto& d : ds) {
    CAPTURE(d.spec());
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
      CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
      CHECK(d.sf(d.survival_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    const double x = d.quantile(0.4);
    CHECK(d.hazard(x) == doctest::Approx(d.pdf(x) / d.sf(x)).epsilon(1e-12));
    CHECK(d.cumhazard_inverse(d.cumhazard(x)) == doctest::Approx(x).epsilon(1e-9));
    // Numerical derivative of the cdf matches the density.
    const double h = 1e-6 * std::max(1.0, x);
    CHECK((d.cdf(x + h) - d.cdf(x - h)) / (2 * h) == doctest::Approx(d.pdf(x)).epsilon(1e-5));
  }
}

TEST_CASE("Burr III and logistic-exponential follow the calibrated forms") {
  const auto b = Distribution::burr3(1.202347, 4.701481);
  const double x = 0.7;
  CHECK(b.cdf(x) == doctest::Approx(std::pow(1 + std::pow(x, -4.701481), -1.202347)).epsilon(1e-13));
  const auto le = Distribution::logistic_exponential(2.4719, 1.7619);
  CHECK(le.sf(x) == doctest::Approx(1 / (1 + std::pow(std::expm1(1.7619 * x), 2.4719))).epsilon(1e-13));
}

TEST_CASE("moments and residual life") {
  const auto e1 = Distribution::exponential(1);
  CHECK(moment_conditional(e1, 1, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(moment_conditional(e1, 2, 0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(moment_conditional(Distribution::uniform(0, 2), 1, 1) == doctest::Approx(1.5).epsilon(1e-10));
  const auto e2 = Distribution::exponential(2);
  CHECK(mrl(e2, 1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(vrl(e2, 1) == doctest::Approx(0.25).epsilon(1e-8));
  for (double t : {0.0, 1.0, 2.5}) CHECK(mrl(Distribution::uniform(0, 3), t) == doctest::Approx((3 - t) / 2).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
  CHECK(code_of([] { Distribution::exponential(0); }) == ErrorCode::DegenerateParameter);
  CHECK(code_of([] { Distribution::uniform(2, 1); }) == ErrorCode::DegenerateParameter);
  CHECK(code_of([] { Distribution::weibull(-1); }) == ErrorCode::DegenerateParameter);
  CHECK(code_of([] { evaluate(Distribution::exponential(1), Function::Quantile, 1.5); }) == ErrorCode::OutOfSupport);
  CHECK(code_of([] { evaluate(Distribution::uniform(0, 1), Function::Pdf, 2.0); }) == ErrorCode::OutOfSupport);
  CHECK(evaluate(Distribution::exponential(2), Function::CumHazard, 1.5) == doctest::Approx(3.0));
}

TEST_CASE("parse_distribution") {
  CHECK(parse_distribution("exp:lambda=2").param("lambda") == 2.0);
  CHECK(parse_distribution("power:k=3").param("b") == 1.0);
  CHECK(parse_distribution("burr3:alpha=1.2,beta=4.7").family() == Family::BurrIII);
  CHECK(code_of([] { parse_distribution("gamma:k=1"); }) == ErrorCode::ParseError);
  CHECK_THROWS_AS(parse_distribution("exp:lambda=abc"), Error);
  CHECK_THROWS_AS(parse_distribution("exp"), Error);
  const auto d = parse_distribution("unif:a=0,b=2");
  CHECK(parse_distribution(d.spec()).param("b") == 2.0);
}

TEST_CASE("sampling") {
  const auto u = sample(Distribution::uniform(0, 1), 3, SampleSeed{7});
  REQUIRE(u.size() == 3);
  for (double v : u) CHECK((v > 0 && v < 1));

  const std::size_t n = 100000;
  const auto e = sample(Distribution::exponential(5.5), n, SampleSeed{11});
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
  CHECK(std::abs(mean - 1 / 5.5) < 3 * (1 / 5.5) / std::sqrt(double(n)));

  auto p = sample(Distribution::power(2, 1), n, SampleSeed{5});
  std::sort(p.begin(), p.end());
  double dist = 0;
  for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(double(i + 1) / n - p[i] * p[i]));
  CHECK(dist < 0.01);

  CHECK(sample(Distribution::exponential(1), 10, SampleSeed{3}) == sample(Distribution::exponential(1), 10, SampleSeed{3}));
  CHECK(sample(Distribution::exponential(1), 10, SampleSeed{3}) != sample(Distribution::exponential(1), 10, SampleSeed{4}));
}

TEST_CASE("RandomStream produces open-interval uniforms and bounded indices") {
  RandomStream s(SampleSeed{1});
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform_open();
    CHECK((u > 0 && u < 1));
    CHECK(s.index_below(7) < 7);
  }
  CHECK(derive_seed(SampleSeed{1}, 0).value != derive_seed(SampleSeed{1}, 1).value);
}
