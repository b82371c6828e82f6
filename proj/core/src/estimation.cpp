#include "wvarent/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

#include "detail/expect.hpp"
#include "detail/gauss_legendre.hpp"
#include "wvarent/error.hpp"
#include "wvarent/format.hpp"
#include "wvarent/residual.hpp"

namespace wvarent {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_sf(double z) { return 0.5 * std::erfc(z * 0.70710678118654752440); }

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception (if any) is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Per-replication estimates at every t; nullopt marks a failed estimate.
using Estimates = std::vector<std::optional<double>>;

Estimates estimate_all(const std::vector<double>& sample, double bandwidth, bool reflect,
                       const std::vector<double>& t_grid) {
  Estimates out(t_grid.size());
  std::optional<KernelEstimate> est;
  try {
    est.emplace(sample, bandwidth, Kernel::Gaussian, reflect);
  } catch (const Error&) {
    return out;
  }
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    try {
      out[j] = wrve_estimate(*est, t_grid[j]);
    } catch (const Error&) {
    }
  }
  return out;
}

StudyRow summarize(double t, std::size_t n, double truth, const std::vector<Estimates>& reps, std::size_t j,
                   SampleSeed seed) {
  StudyRow row;
  row.t = t;
  row.n = n;
  row.true_value = truth;
  row.replications = reps.size();
  row.seed = seed;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t ok = 0;
  for (const auto& r : reps) {
    if (!r[j]) {
      ++row.failures;
      continue;
    }
    const double e = *r[j] - truth;
    sum += e;
    sum_sq += e * e;
    ++ok;
  }
  if (ok == 0) {
    row.bias = row.mse = std::numeric_limits<double>::quiet_NaN();
  } else {
    row.bias = sum / static_cast<double>(ok);
    row.mse = sum_sq / static_cast<double>(ok);
  }
  return row;
}

void require_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::EmptyStudy, "empty t grid");
}

}  // namespace

KernelEstimate::KernelEstimate(std::vector<double> sample, double bandwidth, Kernel kernel, bool reflect)
    : sample_(std::move(sample)), b_(bandwidth), kernel_(kernel), reflect_(reflect) {
  if (sample_.size() < 2) throw Error(ErrorCode::EmptySample, "kernel estimate needs at least two points");
  for (double x : sample_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::ValidationError, "sample contains a non-finite value");
  }
  if (!(b_ > 0.0) || !std::isfinite(b_)) {
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth " + format_number(b_));
  }
  std::sort(sample_.begin(), sample_.end());
}

double KernelEstimate::raw_pdf(double x) const {
  const auto first = std::lower_bound(sample_.begin(), sample_.end(), x - kWindow * b_);
  const auto last = std::upper_bound(first, sample_.end(), x + kWindow * b_);
  double s = 0.0;
  for (auto it = first; it != last; ++it) {
    const double z = (x - *it) / b_;
    s += std::exp(-0.5 * z * z);
  }
  return s * kInvSqrt2Pi / (static_cast<double>(sample_.size()) * b_);
}

double KernelEstimate::pdf(double x) const {
  if (!reflect_) return raw_pdf(x);
  if (x < 0.0) return 0.0;
  return raw_pdf(x) + raw_pdf(-x);
}

double KernelEstimate::sf(double t) const {
  if (reflect_ && t <= 0.0) return 1.0;
  double s = 0.0;
  for (double xi : sample_) {
    s += normal_sf((t - xi) / b_);
    if (reflect_) s += normal_sf((t + xi) / b_);
  }
  return s / static_cast<double>(sample_.size());
}

double KernelEstimate::lower_limit() const {
  return reflect_ ? 0.0 : sample_.front() - kWindow * b_;
}

double KernelEstimate::upper_limit() const { return sample_.back() + kWindow * b_; }

double kde_pdf(const KernelEstimate& est, double x) { return est.pdf(x); }
double kde_sf(const KernelEstimate& est, double t) { return est.sf(t); }

double wrve_estimate(const KernelEstimate& est, double t) {
  const double s = est.sf(t);
  const double lo = std::max(t, est.lower_limit());
  const double hi = est.upper_limit();
  if (!(s > kSurvivalFloor) || !(hi > lo)) {
    throw Error(ErrorCode::TailUnderflow, "estimated survival " + format_number(s) + " at t = " + format_number(t));
  }
  const double log_s = std::log(s);
  const double log_floor = std::log(detail::kDensityFloor);
  const double half = 0.5 * est.bandwidth();
  const std::size_t panels = static_cast<std::size_t>(std::ceil((hi - lo) / half));
  const double h = (hi - lo) / static_cast<double>(panels);

  // Tabulate (quadrature weight * delta, information content) once.
  std::vector<double> mass;
  std::vector<double> ic;
  mass.reserve(panels * 10);
  ic.reserve(panels * 10);
  auto node = [&](double x, double w) {
    const double f = est.pdf(x);
    if (!(f > 0.0)) return;
    const double lf = std::log(f);
    if (!(lf > log_floor)) return;
    const double ld = lf - log_s;
    mass.push_back(w * std::exp(ld));
    ic.push_back(-x * ld);
  };
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + static_cast<double>(p) * h;
    detail::gauss_legendre_panel(a, a + h, node);
  }
  double m = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) m += mass[i] * ic[i];
  double v = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double d = ic[i] - m;
    v += mass[i] * d * d;
  }
  if (!std::isfinite(v)) throw Error(ErrorCode::NonConvergence, "non-finite kernel estimate");
  return v;
}

BandwidthRule BandwidthRule::fixed(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth " + format_number(b));
  return BandwidthRule(Kind::Fixed, b);
}

BandwidthRule BandwidthRule::parse(const std::string& text) {
  if (text == "silverman") return silverman();
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    double b = 0.0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    const auto r = std::from_chars(first, last, b);
    if (r.ec == std::errc() && r.ptr == last) return fixed(b);
  }
  throw Error(ErrorCode::ParseError, "bandwidth must be 'silverman' or 'fixed:<b>', got '" + text + "'");
}

double BandwidthRule::select(const std::vector<double>& sample) const {
  if (kind_ == Kind::Fixed) return b_;
  const std::size_t n = sample.size();
  if (n < 2) throw Error(ErrorCode::EmptySample, "Silverman's rule needs at least two points");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
}

std::string BandwidthRule::label() const {
  return kind_ == Kind::Silverman ? "silverman" : "fixed:" + format_number(b_);
}

EstimatorStudyReport monte_carlo_study(const Distribution& true_dist, const std::vector<double>& t_grid,
                                       const std::vector<std::size_t>& n_grid, std::size_t replications,
                                       const BandwidthRule& rule, SampleSeed seed, const StudyOptions& opts) {
  require_grid(t_grid);
  if (n_grid.empty() || replications == 0) throw Error(ErrorCode::EmptyStudy, "no sample sizes or replications");
  for (std::size_t n : n_grid) {
    if (n < 2) throw Error(ErrorCode::EmptySample, "sample size must be at least 2");
  }
  std::vector<double> truth(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) truth[j] = wrve({true_dist, t_grid[j]}, opts.cfg);

  std::vector<std::vector<Estimates>> results(n_grid.size(), std::vector<Estimates>(replications));
  parallel_for(n_grid.size() * replications, opts.threads, [&](std::size_t task) {
    const std::size_t i = task / replications;
    const std::size_t r = task % replications;
    const std::vector<double> x = sample(true_dist, n_grid[i], derive_seed(seed, r));
    double b = 0.0;
    try {
      b = rule.select(x);
    } catch (const Error&) {
    }
    results[i][r] = estimate_all(x, b, opts.reflect, t_grid);
  });

  EstimatorStudyReport report;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      report.rows.push_back(summarize(t_grid[j], n_grid[i], truth[j], results[i], j, seed));
    }
  }
  return report;
}

EstimatorStudyReport bootstrap_study(const std::vector<double>& data, const Distribution& fitted,
                                     const std::vector<double>& t_grid, double bandwidth, std::size_t resamples,
                                     SampleSeed seed, const StudyOptions& opts) {
  require_grid(t_grid);
  if (data.empty()) throw Error(ErrorCode::EmptySample, "bootstrap needs data");
  if (resamples == 0) throw Error(ErrorCode::EmptyStudy, "zero bootstrap resamples");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::NonPositiveBandwidth, "bandwidth " + format_number(bandwidth));
  }
  std::vector<double> truth(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) truth[j] = wrve({fitted, t_grid[j]}, opts.cfg);

  std::vector<Estimates> results(resamples);
  parallel_for(resamples, opts.threads, [&](std::size_t r) {
    RandomStream stream(derive_seed(seed, r));
    std::vector<double> x(data.size());
    for (auto& v : x) v = data[stream.index_below(data.size())];
    results[r] = estimate_all(x, bandwidth, opts.reflect, t_grid);
  });

  EstimatorStudyReport report;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    report.rows.push_back(summarize(t_grid[j], data.size(), truth[j], results, j, seed));
  }
  return report;
}

}  // namespace wvarent
