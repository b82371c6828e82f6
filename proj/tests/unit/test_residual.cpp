#include <cmath>

#include "doctest.h"
#include "support/oracle.hpp"
#include "wvarent/error.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/residual.hpp"

using namespace wvarent;

namespace {
const WeightFunction kX = WeightFunction::identity();
}

TEST_CASE("WRSE") {
  const auto e1 = Distribution::exponential(1);
  CHECK(wrse({e1, 0.0, kX}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(wrse({e1, 0.0, kX}) == doctest::Approx(weighted_entropy(e1, kX)).epsilon(1e-10));
  // Uniform(0,b): -(1/(b-t)) log(1/(b-t)) times the mean of x over (t, b).
  for (double t : {0.0, 0.5, 1.5}) {
    const double b = 2.0;
    const double expect = std::log(b - t) * (b + t) / 2.0;
    CHECK(wrse({Distribution::uniform(0, b), t, kX}) == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(wrve({Distribution::uniform(0, 2), 1.999999, kX}) < 1e-10);
}

TEST_CASE("WRVE: direct and decomposed routes agree") {
  for (const auto& d : {Distribution::exponential(5.5), Distribution::weibull(2), Distribution::power(2, 1),
                        Distribution::lomax(5, 4), Distribution::uniform(0, 3)}) {
    CAPTURE(d.spec());
    for (double t : {0.05, 0.2, 0.5}) {
      const ResidualQuery q{d, t, kX};
      CHECK(wrve_decomposed(q) == doctest::Approx(wrve(q)).epsilon(1e-8));
    }
  }
}

TEST_CASE("WRVE matches the oracle") {
  for (double t : {0.1, 0.2, 0.3}) {
    const double s = std::exp(-5.5 * t);
    const double o = oracle::wrve([](double x) { return 5.5 * std::exp(-5.5 * x); }, s, t, INFINITY);
    CHECK(wrve({Distribution::exponential(5.5), t, kX}) == doctest::Approx(o).epsilon(1e-9));
  }
  CHECK(wrve({Distribution::exponential(5.5), 0.1, kX}) == doctest::Approx(0.39985).epsilon(5e-5 / 0.39985));
  CHECK(wrve({Distribution::exponential(5.5), 0.2, kX}) == doctest::Approx(0.51331).epsilon(5e-5 / 0.51331));
  CHECK(wrve({Distribution::exponential(5.5), 0.3, kX}) == doctest::Approx(0.64677).epsilon(5e-5 / 0.64677));
  const double t = 0.5;
  const double o = oracle::wrve([](double x) { return 2 * x; }, 1 - t * t, t, 1.0);
  CHECK(wrve({Distribution::power(2, 1), t, kX}) == doctest::Approx(o).epsilon(1e-8));
}

TEST_CASE("WRVE tends to WVE as t -> 0") {
  for (const auto& d : {Distribution::exponential(2), Distribution::weibull(2), Distribution::power(3, 1),
                        Distribution::uniform(0, 4)}) {
    CHECK(std::abs(wrve({d, 1e-6, kX}) - weighted_varentropy(d, kX)) <= 1e-4);
  }
}

TEST_CASE("closed-form WRVE") {
  for (double t : {0.0, 0.5, 1.2, 1.9}) {
    const double b = 2.0;
    const double expect = std::pow((b - t) * std::log(b - t), 2) / 12.0;
    CHECK(closed_form_wrve(Distribution::uniform(0, b), t) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(wrve({Distribution::uniform(0, b), t, kX}) == doctest::Approx(expect).epsilon(1e-8));
  }
  CHECK(std::abs(closed_form_wrve(Distribution::uniform(0, 2), 1)) < 1e-15);
  CHECK(closed_form_wrve(Distribution::exponential(5.5), 0.2) == doctest::Approx(0.51331).epsilon(1e-4));
  CHECK(closed_form_wrve(Distribution::power(2, 1), 0.5) ==
        doctest::Approx(wrve({Distribution::power(2, 1), 0.5, kX})).epsilon(1e-6));
}

TEST_CASE("residual varentropy") {
  for (double t : {0.0, 0.3, 2.0, 7.0}) CHECK(rve(Distribution::exponential(3), t) == doctest::Approx(1.0).epsilon(1e-8));
  for (double t : {0.0, 0.3, 1.0, 1.9}) CHECK(std::abs(rve(Distribution::uniform(0, 2), t)) < 1e-10);
  CHECK(rve(Distribution::weibull(2), 0.0) == doctest::Approx(varentropy(Distribution::weibull(2))).epsilon(1e-9));
}

TEST_CASE("WRVE derivative") {
  const auto r = wrve_derivative(Distribution::exponential(1), 1.0);
  CHECK(r.corrected_value == doctest::Approx(r.finite_difference_value).epsilon(1e-4));
  CHECK(std::abs(r.formula_value - r.finite_difference_value) > 1.0);
  for (double t : {0.2, 0.6}) {
    const auto p = wrve_derivative(Distribution::power(2, 1), t);
    CHECK(p.corrected_value == doctest::Approx(p.finite_difference_value).epsilon(1e-4));
  }
  // Uniform(0,b) at b - t = 1: the analytic derivative vanishes.
  CHECK(std::abs(wrve_derivative(Distribution::uniform(0, 2), 1.0).corrected_value) < 1e-6);
}

TEST_CASE("WRVE upper bound") {
  const auto e1 = Distribution::exponential(1);
  for (double t = 0.25; t <= 5.0; t += 0.25) {
    const auto b = wrve_upper_bound(e1, t, 1, 2);
    CHECK(b.condition_holds);
    CHECK(wrve({e1, t, kX}) <= b.bound + 1e-6);
  }
  CHECK(wrve_upper_bound(e1, 0.0, 1, 2).bound == doctest::Approx(wve_upper_bound(e1, 1, 2).bound).epsilon(1e-9));
  const auto lomax = wrve_upper_bound(Distribution::lomax(5, 4), 0.5, 1, 0.5);
  CHECK(lomax.condition_holds);
  CHECK(wrve({Distribution::lomax(5, 4), 0.5, kX}) <= lomax.bound + 1e-6);
}

TEST_CASE("WRVE lower bound") {
  const auto e1 = Distribution::exponential(1);
  CHECK(wrve_lower_bound(e1, 0.0) <= 20.0 + 1e-6);
  for (double t : {0.5, 1.0, 2.0}) CHECK(wrve_lower_bound(e1, t) <= wrve({e1, t, kX}) + 1e-6);
  CHECK(wrve_lower_bound(Distribution::uniform(0, 1), 0.0) <= 1e-6);
}

TEST_CASE("eta function satisfies its defining relation") {
  const auto e = EtaFunction::build(Distribution::exponential(1), 0.5);
  CHECK(e.mean() == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(e.variance() == doctest::Approx(1.0).epsilon(1e-8));
  // Residual of Exp(1) past t: eta(x) = x - t.
  for (double x : {0.6, 1.0, 3.0}) CHECK(e(x) == doctest::Approx(x - 0.5).epsilon(1e-5));
}

TEST_CASE("residual errors") {
  CHECK_THROWS_AS(wrve({Distribution::uniform(0, 1), 1.5, kX}), Error);
  CHECK_THROWS_AS(wrve({Distribution::power(2, 1), 1.0, kX}), Error);
  // t below the support keeps the whole law.
  CHECK(wrve({Distribution::uniform(1, 3), 0.5, kX}) == doctest::Approx(wrve({Distribution::uniform(1, 3), 1.0, kX})));
}
