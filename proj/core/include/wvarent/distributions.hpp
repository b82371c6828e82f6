#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wvarent/quadrature.hpp"

namespace wvarent {

/// Survival probabilities below this are treated as an empty residual law.
inline constexpr double kSurvivalFloor = 1e-280;

enum class Family {
  Uniform,
  Exponential,
  Power,
  ParetoI,
  Lomax,
  Weibull,
  BurrIII,
  LogisticExponential,
  LogUniform,
  Derived,
};

std::string_view to_string(Family family) noexcept;

struct Support {
  double lower = 0.0;
  double upper = kInfinity;

  bool contains(double x) const { return x >= lower && x <= upper; }
  bool bounded() const { return upper < kInfinity; }
};

struct Parameter {
  std::string name;
  double value;
};

/// Evaluation surface of one lifetime law. Implementations may assume their
/// arguments lie inside the support; Distribution takes care of the rest.
class DistributionModel {
 public:
  virtual ~DistributionModel() = default;

  virtual Family family() const { return Family::Derived; }
  virtual std::string spec() const = 0;
  virtual std::vector<Parameter> parameters() const { return {}; }
  virtual Support support() const = 0;

  virtual double pdf(double x) const = 0;
  virtual double log_pdf(double x) const;
  virtual double cdf(double x) const = 0;
  virtual double sf(double x) const;
  virtual double log_sf(double x) const;
  virtual double quantile(double p) const = 0;
  /// Inverse of the survival function: the x with sf(x) = q.
  virtual double survival_quantile(double q) const;
};

/// Immutable handle to a lifetime law; cheap to copy and safe to share
/// between threads.
class Distribution {
 public:
  explicit Distribution(std::shared_ptr<const DistributionModel> model);

  static Distribution uniform(double a, double b);
  static Distribution exponential(double lambda);
  static Distribution power(double k, double b = 1.0);
  static Distribution pareto1(double alpha, double beta);
  static Distribution lomax(double a, double b);
  static Distribution weibull(double c);
  /// F(x) = (1 + x^-beta)^-alpha: alpha is the outer shape, beta the inner one.
  static Distribution burr3(double alpha, double beta);
  /// S(x) = 1 / (1 + (e^{lambda x} - 1)^alpha).
  static Distribution logistic_exponential(double alpha, double lambda);
  static Distribution log_uniform(double alpha, double beta);

  Family family() const { return model_->family(); }
  std::string spec() const { return model_->spec(); }
  std::vector<Parameter> parameters() const { return model_->parameters(); }
  /// Throws DegenerateParameter when the family has no parameter of that name.
  double param(std::string_view name) const;
  Support support() const { return support_; }

  // Total functions: zero density and clamped cdf outside the support.
  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
  double log_sf(double x) const;
  double quantile(double p) const;
  double survival_quantile(double q) const;
  double hazard(double x) const;
  /// Lambda(x) = -log sf(x).
  double cumhazard(double x) const { return -log_sf(x); }
  double cumhazard_inverse(double h) const;

  const DistributionModel& model() const { return *model_; }

 private:
  std::shared_ptr<const DistributionModel> model_;
  Support support_;
};

enum class Function { Pdf, Cdf, Sf, Quantile, Hazard, CumHazard };

/// Checked evaluation: OutOfSupport when x is outside the function's domain.
double evaluate(const Distribution& dist, Function fn, double x);

/// Parses `family:name=value,...`, e.g. `exp:lambda=5.5` or `unif:a=0,b=2`.
Distribution parse_distribution(std::string_view text);

// Conditional moments of the residual law [X | X > t].

/// integral of g over (max(t, lower), upper) with residual-mass truncation.
QuadratureResult integrate_tail(const Distribution& dist, double t, const Integrand& g,
                                const QuadratureConfig& cfg = {});
/// E[X^power | X > t], power in {1, 2}; power 1 is the vitality function.
double moment_conditional(const Distribution& dist, int power, double t,
                          const QuadratureConfig& cfg = {});
/// Mean residual life E[X - t | X > t].
double mrl(const Distribution& dist, double t, const QuadratureConfig& cfg = {});
/// Variance residual life Var[X - t | X > t].
double vrl(const Distribution& dist, double t, const QuadratureConfig& cfg = {});

// Sampling.

struct SampleSeed {
  std::uint64_t value = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Independent stream seed for (seed, stream index).
SampleSeed derive_seed(SampleSeed seed, std::uint64_t stream);

/// mt19937_64 with a fully specified open-interval uniform; sequences are
/// identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(SampleSeed seed) : engine_(seed.value) {}
  double uniform_open();
  std::size_t index_below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Inverse-transform sampler. Owns its stream; not for concurrent use.
class Sampler {
 public:
  Sampler(Distribution dist, SampleSeed seed) : dist_(std::move(dist)), stream_(seed) {}
  double next() { return dist_.quantile(stream_.uniform_open()); }
  std::vector<double> draw(std::size_t n);

 private:
  Distribution dist_;
  RandomStream stream_;
};

std::vector<double> sample(const Distribution& dist, std::size_t n, SampleSeed seed);

}  // namespace wvarent
