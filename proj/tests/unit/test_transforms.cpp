#include <cmath>

#include "doctest.h"
#include "support/oracle.hpp"
#include "wvarent/error.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/residual.hpp"
#include "wvarent/transforms.hpp"

using namespace wvarent;

namespace {
const WeightFunction kX = WeightFunction::identity();
}

TEST_CASE("monotone maps") {
  const auto sq = MonotoneMap::square();
  CHECK(sq(3.0) == 9.0);
  CHECK(sq.inverse(9.0) == doctest::Approx(3.0));
  CHECK(sq.increasing());
  CHECK_FALSE(MonotoneMap::reflect(2.0).increasing());
  CHECK_FALSE(MonotoneMap::affine(-1.0, 5.0).increasing());
  CHECK_THROWS_AS(MonotoneMap::affine(0.0, 1.0), Error);
}

TEST_CASE("transformed law") {
  const auto y = transform(Distribution::exponential(1), MonotoneMap::affine(2, 0));
  const auto e = Distribution::exponential(0.5);
  for (double x : {0.1, 1.0, 4.0}) {
    CHECK(y.pdf(x) == doctest::Approx(e.pdf(x)).epsilon(1e-13));
    CHECK(y.cdf(x) == doctest::Approx(e.cdf(x)).epsilon(1e-13));
  }
  const auto r = transform(Distribution::power(2, 1), MonotoneMap::reflect(1.0));
  CHECK(r.cdf(0.25) == doctest::Approx(1 - 0.75 * 0.75).epsilon(1e-13));
  CHECK_THROWS_AS(transform(Distribution::exponential(1), MonotoneMap::reflect(1.0)), Error);
}

TEST_CASE("affine and scale identities") {
  const auto e1 = Distribution::exponential(1);
  CHECK(wve_affine(e1, 1, 0) == doctest::Approx(weighted_varentropy(e1, kX)).epsilon(1e-9));
  const double direct = weighted_varentropy(Distribution::exponential(0.5), kX);
  CHECK(wve_scale(e1, 2) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(wve_affine(e1, 2, 0) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(wve_direct(e1, MonotoneMap::affine(2, 0)) == doctest::Approx(direct).epsilon(1e-8));
  const auto u = Distribution::uniform(0, 1);
  CHECK(wve_monotone(u, MonotoneMap::affine(2, 0)) == doctest::Approx(wve_scale(u, 2)).epsilon(1e-9));
}

TEST_CASE("location identity") {
  const auto e1 = Distribution::exponential(1);
  for (double b : {0.5, 1.0, 3.0}) {
    // Exp(1) shifted by b: 20 + 8b + b^2.
    CHECK(wve_location(e1, b) == doctest::Approx(20 + 8 * b + b * b).epsilon(1e-8));
    CHECK(wve_direct(e1, MonotoneMap::affine(1, b)) == doctest::Approx(20 + 8 * b + b * b).epsilon(1e-8));
    CHECK(wve_location_transcribed(e1, b) == doctest::Approx(20 - b).epsilon(1e-8));
  }
}

TEST_CASE("monotone identity, increasing maps") {
  const auto e1 = Distribution::exponential(1);
  CHECK(wve_monotone(e1, MonotoneMap::identity()) == doctest::Approx(weighted_varentropy(e1, kX)).epsilon(1e-10));
  // X^2 for X ~ Exp(1) has density e^{-sqrt y} / (2 sqrt y).
  const double o = oracle::wve([](double y) { const double r = std::sqrt(y); return std::exp(-r) / (2 * r); }, 0, INFINITY,
                               [](double y) { return y; }, 1.0);
  CHECK(wve_monotone(e1, MonotoneMap::square()) == doctest::Approx(o).epsilon(1e-5));
  CHECK(wve_direct(e1, MonotoneMap::square()) == doctest::Approx(o).epsilon(1e-5));
}

TEST_CASE("monotone identity, decreasing maps") {
  const auto p = Distribution::power(2, 1);
  const auto m = MonotoneMap::reflect(1.0);
  CHECK(wve_monotone(p, m) == doctest::Approx(wve_direct(p, m)).epsilon(1e-7));
  CHECK(std::abs(wve_monotone_transcribed(p, m) - wve_direct(p, m)) > 1e-3);
}

TEST_CASE("residual monotone identity") {
  const auto e1 = Distribution::exponential(1);
  const auto id = MonotoneMap::identity();
  for (double t : {0.3, 1.0}) CHECK(wrve_monotone(e1, id, t) == doctest::Approx(wrve({e1, t, kX})).epsilon(1e-9));
  const auto sq = MonotoneMap::square();
  CHECK(wrve_monotone(e1, sq, 1.0) == doctest::Approx(wrve_direct(e1, sq, 1.0)).epsilon(1e-5));
  const auto p = Distribution::power(2, 1);
  const auto r = MonotoneMap::reflect(1.0);
  CHECK(wrve_monotone(p, r, 0.3) == doctest::Approx(wrve_direct(p, r, 0.3)).epsilon(1e-5));
}

TEST_CASE("residual affine identity") {
  const auto e1 = Distribution::exponential(1);
  CHECK(wrve_affine(e1, 1, 0, 0.7) == doctest::Approx(wrve({e1, 0.7, kX})).epsilon(1e-9));
  CHECK(wrve_affine(e1, 2, 1, 2) == doctest::Approx(wrve_direct(e1, MonotoneMap::affine(2, 1), 2)).epsilon(1e-5));
  CHECK(wrve_affine(e1, 2, 1, 2) == doctest::Approx(145.65).epsilon(1e-3));
  CHECK(wrve_affine_transcribed(e1, 1, 1, 2) == doctest::Approx(wrve_affine(e1, 1, 1, 2)).epsilon(1e-8));
  // Negative shift on a Pareto with a finite weighted second moment.
  const auto par = Distribution::pareto1(2, 5);
  CHECK(wrve_affine(par, 1, -1, 1.5) == doctest::Approx(wrve_direct(par, MonotoneMap::affine(1, -1), 1.5)).epsilon(1e-5));
  CHECK_THROWS_AS(wrve_affine(par, 1, -3, 1.5), Error);
}

TEST_CASE("direction check catches a mislabelled map") {
  const MonotoneMap bad([](double x) { return -x + 5; }, [](double) { return -1.0; }, [](double y) { return 5 - y; },
                        MonotoneMap::Direction::Increasing, "mislabelled");
  try {
    wve_monotone(Distribution::uniform(0, 1), bad);
    FAIL("expected BranchMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchMismatch);
  }
}
