#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wvarent/distributions.hpp"
#include "wvarent/quadrature.hpp"

namespace wvarent {

enum class Kernel { Gaussian };

/// Kernel density estimate over a sorted copy of the sample.
class KernelEstimate {
 public:
  /// Kernels further than this many bandwidths from x are skipped by pdf().
  static constexpr double kWindow = 10.0;

  /// EmptySample for fewer than two points; NonPositiveBandwidth unless b > 0.
  /// With reflect set, mass below 0 is folded back onto [0, inf).
  KernelEstimate(std::vector<double> sample, double bandwidth, Kernel kernel = Kernel::Gaussian,
                 bool reflect = false);

  double pdf(double x) const;
  /// Exact Gaussian tail sum (1/n) sum Phi-bar((t - X_i) / b).
  double sf(double t) const;

  const std::vector<double>& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }
  double bandwidth() const { return b_; }
  Kernel kernel() const { return kernel_; }
  bool reflect() const { return reflect_; }
  /// Lowest point with non-negligible density: min - 10 b (or 0 when reflecting).
  double lower_limit() const;
  /// max + 10 b.
  double upper_limit() const;

 private:
  double raw_pdf(double x) const;

  std::vector<double> sample_;
  double b_;
  Kernel kernel_;
  bool reflect_;
};

double kde_pdf(const KernelEstimate& est, double x);
double kde_sf(const KernelEstimate& est, double t);

/// Plug-in estimate of VE^x(X; t) with delta = f-hat / sf-hat(t), integrated
/// over [max(t, lower_limit), upper_limit] by composite 10-point Gauss-Legendre
/// panels no wider than b / 2. TailUnderflow when sf-hat(t) is negligible.
double wrve_estimate(const KernelEstimate& est, double t);

class BandwidthRule {
 public:
  enum class Kind { Silverman, Fixed };

  static BandwidthRule silverman() { return BandwidthRule(Kind::Silverman, 0.0); }
  /// NonPositiveBandwidth unless b > 0.
  static BandwidthRule fixed(double b);
  /// silverman | fixed:<b>
  static BandwidthRule parse(const std::string& text);

  Kind kind() const { return kind_; }
  double fixed_value() const { return b_; }
  /// 1.06 sd n^(-1/5) (sample sd with n - 1) or the fixed value.
  double select(const std::vector<double>& sample) const;
  std::string label() const;

 private:
  BandwidthRule(Kind kind, double b) : kind_(kind), b_(b) {}
  Kind kind_;
  double b_;
};

struct StudyRow {
  double t = 0.0;
  std::size_t n = 0;
  double bias = 0.0;
  double mse = 0.0;
  double true_value = 0.0;
  std::size_t replications = 0;
  /// Replications whose estimate raised an error; excluded from bias and mse.
  std::size_t failures = 0;
  SampleSeed seed;
};

/// Rows are ordered by t, then n.
struct EstimatorStudyReport {
  std::vector<StudyRow> rows;
};

struct StudyOptions {
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  bool reflect = false;
  /// Used for the true values only.
  QuadratureConfig cfg{};
};

/// Replication r draws from the stream derive_seed(seed, r); its sample of
/// size n is the first n draws, so every n sees common random numbers. Each
/// sample serves every t and the report does not depend on scheduling. EmptyStudy for empty grids or zero
/// replications.
EstimatorStudyReport monte_carlo_study(const Distribution& true_dist, const std::vector<double>& t_grid,
                                       const std::vector<std::size_t>& n_grid, std::size_t replications,
                                       const BandwidthRule& rule, SampleSeed seed,
                                       const StudyOptions& opts = {});

/// Resample r uses stream derive_seed(seed, r) and draws |data| indices with
/// replacement. EmptySample for empty data; EmptyStudy for zero resamples.
EstimatorStudyReport bootstrap_study(const std::vector<double>& data, const Distribution& fitted,
                                     const std::vector<double>& t_grid, double bandwidth,
                                     std::size_t resamples, SampleSeed seed, const StudyOptions& opts = {});

}  // namespace wvarent
