#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wvarent/error.hpp"
#include "wvarent/estimation.hpp"
#include "wvarent/quadrature.hpp"
#include "wvarent/residual.hpp"

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

// Same functional as the estimator, on the adaptive engine instead of the
// fixed Gauss-Legendre panels.
double wrve_estimate_adaptive(const KernelEstimate& est, double t) {
  const double s = est.sf(t);
  const double lo = std::max(t, est.lower_limit());
  const double hi = est.upper_limit();
  auto ic = [&](double x) {
    const double f = est.pdf(x) / s;
    return f > 0 ? -x * std::log(f) : 0.0;
  };
  QuadratureConfig cfg;
  cfg.max_subdivisions = 20000;
  const double m1 = integrate([&](double x) { return est.pdf(x) / s * ic(x); }, lo, hi, cfg).value;
  return integrate([&](double x) { const double v = ic(x) - m1; return est.pdf(x) / s * v * v; }, lo, hi, cfg).value;
}
}  // namespace

TEST_CASE("kernel estimate basics") {
  const KernelEstimate point(std::vector<double>(5, 2.0), 0.1);
  CHECK(point.pdf(2.0) == doctest::Approx(1 / (0.1 * std::sqrt(2 * std::numbers::pi))).epsilon(1e-13));
  CHECK(kde_sf(point, -1e6) == doctest::Approx(1.0));
  const KernelEstimate est({0.5, 1.0, 1.2, 2.5}, 0.3);
  CHECK(kde_sf(est, 1.0) == doctest::Approx(integrate([&](double x) { return kde_pdf(est, x); }, 1.0, est.upper_limit()).value)
                               .epsilon(1e-10));
  CHECK(code_of([] { KernelEstimate({1.0}, 0.2); }) == ErrorCode::EmptySample);
  CHECK(code_of([] { KernelEstimate({1.0, 2.0}, 0.0); }) == ErrorCode::NonPositiveBandwidth);
}

TEST_CASE("reflected kernel keeps its mass on [0, inf)") {
  const KernelEstimate est({0.05, 0.1, 0.4, 0.9}, 0.2, Kernel::Gaussian, true);
  CHECK(est.sf(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([&](double x) { return est.pdf(x); }, 0.0, est.upper_limit()).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Gauss-Legendre estimator agrees with adaptive quadrature") {
  const auto data = sample(Distribution::exponential(5.5), 100, SampleSeed{9});
  const KernelEstimate est(data, BandwidthRule::silverman().select(data));
  for (double t : {-1.0, 0.1, 0.3}) {
    CHECK(wrve_estimate(est, t) == doctest::Approx(wrve_estimate_adaptive(est, t)).epsilon(1e-8));
  }
}

TEST_CASE("estimator behaviour") {
  std::vector<double> estimates;
  for (std::uint64_t s = 1; s <= 21; ++s) {
    const auto data = sample(Distribution::exponential(5.5), 200, SampleSeed{s});
    estimates.push_back(wrve_estimate(KernelEstimate(data, BandwidthRule::silverman().select(data)), 0.1));
  }
  std::nth_element(estimates.begin(), estimates.begin() + 10, estimates.end());
  CHECK(std::abs(estimates[10] - 0.39985) < 0.2);
  const auto data = sample(Distribution::exponential(5.5), 200, SampleSeed{3});
  const KernelEstimate est(data, BandwidthRule::silverman().select(data));
  // A near point mass at 1 is a narrow normal law: its varentropy is 1/2 at
  // any scale, and w = x is close to 1 there.
  const KernelEstimate tight({1.0, 1.0 + 1e-9, 1.0 - 1e-9}, 1e-6);
  CHECK(wrve_estimate(tight, 0.0) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(code_of([&] { wrve_estimate(est, 50.0); }) == ErrorCode::TailUnderflow);
}

TEST_CASE("bandwidth rules") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(BandwidthRule::silverman().select(x) == doctest::Approx(1.06 * std::sqrt(2.5) * std::pow(5.0, -0.2)));
  CHECK(BandwidthRule::parse("fixed:0.4").select(x) == 0.4);
  CHECK(BandwidthRule::parse("silverman").kind() == BandwidthRule::Kind::Silverman);
  CHECK_THROWS_AS(BandwidthRule::parse("fixed:-1"), Error);
  CHECK_THROWS_AS(BandwidthRule::parse("scott"), Error);
}

TEST_CASE("Monte-Carlo harness") {
  const auto e = Distribution::exponential(5.5);
  const auto one = monte_carlo_study(e, {0.1}, {50}, 1, BandwidthRule::silverman(), SampleSeed{5});
  REQUIRE(one.rows.size() == 1);
  const auto draws = sample(e, 50, derive_seed(SampleSeed{5}, 0));
  const KernelEstimate est(draws, BandwidthRule::silverman().select(draws));
  CHECK(one.rows[0].bias == doctest::Approx(wrve_estimate(est, 0.1) - one.rows[0].true_value).epsilon(1e-12));
  CHECK(one.rows[0].true_value == doctest::Approx(0.39985).epsilon(1.3e-4));

  StudyOptions serial;
  serial.threads = 1;
  StudyOptions parallel;
  parallel.threads = 4;
  const auto a = monte_carlo_study(e, {0.1, 0.2}, {30, 60}, 40, BandwidthRule::silverman(), SampleSeed{8}, serial);
  const auto b = monte_carlo_study(e, {0.1, 0.2}, {30, 60}, 40, BandwidthRule::silverman(), SampleSeed{8}, parallel);
  REQUIRE(a.rows.size() == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].bias == b.rows[i].bias);
    CHECK(a.rows[i].mse == b.rows[i].mse);
  }
  CHECK(a.rows[0].t == 0.1);
  CHECK(a.rows[1].n == 60);
  CHECK(code_of([&] { monte_carlo_study(e, {0.1}, {50}, 0, BandwidthRule::silverman(), SampleSeed{1}); }) ==
        ErrorCode::EmptyStudy);
  CHECK(code_of([&] { monte_carlo_study(e, {}, {50}, 3, BandwidthRule::silverman(), SampleSeed{1}); }) ==
        ErrorCode::EmptyStudy);
}

TEST_CASE("bootstrap harness") {
  const std::vector<double> data{0.2, 0.4, 0.5, 0.9, 1.3, 0.7, 0.3};
  const auto e = Distribution::exponential(2);
  const auto r = bootstrap_study(data, e, {0.1}, 0.2, 30, SampleSeed{2});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].n == data.size());
  CHECK(r.rows[0].true_value == doctest::Approx(wrve({e, 0.1, WeightFunction::identity()})).epsilon(1e-12));
  CHECK(r.rows[0].mse >= r.rows[0].bias * r.rows[0].bias);
  CHECK(code_of([&] { bootstrap_study(data, e, {0.1}, 0.2, 0, SampleSeed{2}); }) == ErrorCode::EmptyStudy);
  CHECK(code_of([&] { bootstrap_study({}, e, {0.1}, 0.2, 5, SampleSeed{2}); }) == ErrorCode::EmptySample);
}
