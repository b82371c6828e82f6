#include "wvarent/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "wvarent/error.hpp"
#include "wvarent/format.hpp"

namespace wvarent {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::DegenerateParameter, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

std::string make_spec(std::string_view key, const std::vector<Parameter>& params) {
  std::string out(key);
  out += ':';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += params[i].name + '=' + format_number(params[i].value);
  }
  return out;
}

class UniformModel final : public DistributionModel {
 public:
  UniformModel(double a, double b) : a_(a), b_(b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform requires a < b");
  }
  Family family() const override { return Family::Uniform; }
  std::vector<Parameter> parameters() const override { return {{"a", a_}, {"b", b_}}; }
  std::string spec() const override { return make_spec("unif", parameters()); }
  Support support() const override { return {a_, b_}; }
  double pdf(double) const override { return 1.0 / (b_ - a_); }
  double log_pdf(double) const override { return -std::log(b_ - a_); }
  double cdf(double x) const override { return (x - a_) / (b_ - a_); }
  double sf(double x) const override { return (b_ - x) / (b_ - a_); }
  double quantile(double p) const override { return a_ + p * (b_ - a_); }
  double survival_quantile(double q) const override { return b_ - q * (b_ - a_); }

 private:
  double a_, b_;
};

class ExponentialModel final : public DistributionModel {
 public:
  explicit ExponentialModel(double lambda) : lambda_(lambda) {
    require(positive(lambda), "exponential requires lambda > 0");
  }
  Family family() const override { return Family::Exponential; }
  std::vector<Parameter> parameters() const override { return {{"lambda", lambda_}}; }
  std::string spec() const override { return make_spec("exp", parameters()); }
  Support support() const override { return {0.0, kInfinity}; }
  double pdf(double x) const override { return lambda_ * std::exp(-lambda_ * x); }
  double log_pdf(double x) const override { return std::log(lambda_) - lambda_ * x; }
  double cdf(double x) const override { return -std::expm1(-lambda_ * x); }
  double sf(double x) const override { return std::exp(-lambda_ * x); }
  double log_sf(double x) const override { return -lambda_ * x; }
  double quantile(double p) const override { return -std::log1p(-p) / lambda_; }
  double survival_quantile(double q) const override { return -std::log(q) / lambda_; }

 private:
  double lambda_;
};

class PowerModel final : public DistributionModel {
 public:
  PowerModel(double k, double b) : k_(k), b_(b) {
    require(positive(k) && positive(b), "power requires k > 0 and b > 0");
  }
  Family family() const override { return Family::Power; }
  std::vector<Parameter> parameters() const override { return {{"k", k_}, {"b", b_}}; }
  std::string spec() const override { return make_spec("power", parameters()); }
  Support support() const override { return {0.0, b_}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return std::log(k_ / b_) + (k_ - 1.0) * std::log(x / b_);
  }
  double cdf(double x) const override { return std::pow(x / b_, k_); }
  double sf(double x) const override { return -std::expm1(k_ * std::log(x / b_)); }
  double quantile(double p) const override { return b_ * std::pow(p, 1.0 / k_); }
  double survival_quantile(double q) const override {
    return b_ * std::exp(std::log1p(-q) / k_);
  }

 private:
  double k_, b_;
};

class ParetoModel final : public DistributionModel {
 public:
  ParetoModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    require(positive(alpha) && positive(beta), "pareto requires alpha > 0 and beta > 0");
  }
  Family family() const override { return Family::ParetoI; }
  std::vector<Parameter> parameters() const override {
    return {{"alpha", alpha_}, {"beta", beta_}};
  }
  std::string spec() const override { return make_spec("pareto", parameters()); }
  Support support() const override { return {alpha_, kInfinity}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return std::log(beta_) + beta_ * std::log(alpha_) - (beta_ + 1.0) * std::log(x);
  }
  double cdf(double x) const override { return -std::expm1(log_sf(x)); }
  double sf(double x) const override { return std::exp(log_sf(x)); }
  double log_sf(double x) const override { return beta_ * std::log(alpha_ / x); }
  double quantile(double p) const override {
    return alpha_ * std::exp(-std::log1p(-p) / beta_);
  }
  double survival_quantile(double q) const override {
    return alpha_ * std::exp(-std::log(q) / beta_);
  }

 private:
  double alpha_, beta_;
};

class LomaxModel final : public DistributionModel {
 public:
  LomaxModel(double a, double b) : a_(a), b_(b) {
    require(positive(a) && positive(b), "lomax requires a > 0 and b > 0");
  }
  Family family() const override { return Family::Lomax; }
  std::vector<Parameter> parameters() const override { return {{"a", a_}, {"b", b_}}; }
  std::string spec() const override { return make_spec("lomax", parameters()); }
  Support support() const override { return {0.0, kInfinity}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return std::log(b_ / a_) - (b_ + 1.0) * std::log1p(x / a_);
  }
  double cdf(double x) const override { return -std::expm1(log_sf(x)); }
  double sf(double x) const override { return std::exp(log_sf(x)); }
  double log_sf(double x) const override { return -b_ * std::log1p(x / a_); }
  double quantile(double p) const override { return a_ * std::expm1(-std::log1p(-p) / b_); }
  double survival_quantile(double q) const override {
    return a_ * std::expm1(-std::log(q) / b_);
  }

 private:
  double a_, b_;
};

class WeibullModel final : public DistributionModel {
 public:
  explicit WeibullModel(double c) : c_(c) { require(positive(c), "weibull requires c > 0"); }
  Family family() const override { return Family::Weibull; }
  std::vector<Parameter> parameters() const override { return {{"c", c_}}; }
  std::string spec() const override { return make_spec("weibull", parameters()); }
  Support support() const override { return {0.0, kInfinity}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return std::log(c_) + (c_ - 1.0) * std::log(x) - std::pow(x, c_);
  }
  double cdf(double x) const override { return -std::expm1(-std::pow(x, c_)); }
  double sf(double x) const override { return std::exp(-std::pow(x, c_)); }
  double log_sf(double x) const override { return -std::pow(x, c_); }
  double quantile(double p) const override { return std::pow(-std::log1p(-p), 1.0 / c_); }
  double survival_quantile(double q) const override { return std::pow(-std::log(q), 1.0 / c_); }

 private:
  double c_;
};

class BurrIIIModel final : public DistributionModel {
 public:
  BurrIIIModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    require(positive(alpha) && positive(beta), "burr3 requires alpha > 0 and beta > 0");
  }
  Family family() const override { return Family::BurrIII; }
  std::vector<Parameter> parameters() const override {
    return {{"alpha", alpha_}, {"beta", beta_}};
  }
  std::string spec() const override { return make_spec("burr3", parameters()); }
  Support support() const override { return {0.0, kInfinity}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    const double lx = std::log(x);
    return std::log(alpha_ * beta_) - (beta_ + 1.0) * lx - (alpha_ + 1.0) * softplus(-beta_ * lx);
  }
  double cdf(double x) const override { return std::exp(log_cdf(x)); }
  double sf(double x) const override { return -std::expm1(log_cdf(x)); }
  double log_sf(double x) const override { return std::log(sf(x)); }
  double quantile(double p) const override {
    // x^-beta = p^(-1/alpha) - 1
    return std::pow(std::expm1(-std::log(p) / alpha_), -1.0 / beta_);
  }
  double survival_quantile(double q) const override {
    return std::pow(std::expm1(-std::log1p(-q) / alpha_), -1.0 / beta_);
  }

 private:
  double log_cdf(double x) const { return -alpha_ * softplus(-beta_ * std::log(x)); }
  double alpha_, beta_;
};

class LogisticExponentialModel final : public DistributionModel {
 public:
  LogisticExponentialModel(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
    require(positive(alpha) && positive(lambda), "logexp requires alpha > 0 and lambda > 0");
  }
  Family family() const override { return Family::LogisticExponential; }
  std::vector<Parameter> parameters() const override {
    return {{"alpha", alpha_}, {"lambda", lambda_}};
  }
  std::string spec() const override { return make_spec("logexp", parameters()); }
  Support support() const override { return {0.0, kInfinity}; }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    const double lu = log_u(x);
    return std::log(alpha_ * lambda_) + lambda_ * x + (alpha_ - 1.0) * lu -
           2.0 * softplus(alpha_ * lu);
  }
  double cdf(double x) const override { return std::exp(-softplus(-alpha_ * log_u(x))); }
  double sf(double x) const override { return std::exp(log_sf(x)); }
  double log_sf(double x) const override { return -softplus(alpha_ * log_u(x)); }
  double quantile(double p) const override {
    // u^alpha = p / (1 - p), x = log1p(u) / lambda
    const double lu = (std::log(p) - std::log1p(-p)) / alpha_;
    return log1p_exp(lu) / lambda_;
  }
  double survival_quantile(double q) const override {
    const double lu = (std::log1p(-q) - std::log(q)) / alpha_;
    return log1p_exp(lu) / lambda_;
  }

 private:
  // log(e^{lambda x} - 1)
  double log_u(double x) const {
    const double z = lambda_ * x;
    return z > 35.0 ? z + std::log1p(-std::exp(-z)) : std::log(std::expm1(z));
  }
  static double log1p_exp(double z) { return softplus(z); }
  double alpha_, lambda_;
};

class LogUniformModel final : public DistributionModel {
 public:
  LogUniformModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    require(positive(alpha) && positive(beta) && alpha < beta,
            "logunif requires 0 < alpha < beta");
  }
  Family family() const override { return Family::LogUniform; }
  std::vector<Parameter> parameters() const override {
    return {{"alpha", alpha_}, {"beta", beta_}};
  }
  std::string spec() const override { return make_spec("logunif", parameters()); }
  Support support() const override { return {alpha_, beta_}; }
  double pdf(double x) const override { return 1.0 / (x * span()); }
  double log_pdf(double x) const override { return -std::log(x) - std::log(span()); }
  double cdf(double x) const override { return std::log(x / alpha_) / span(); }
  double sf(double x) const override { return std::log(beta_ / x) / span(); }
  double quantile(double p) const override { return alpha_ * std::exp(p * span()); }
  double survival_quantile(double q) const override { return beta_ * std::exp(-q * span()); }

 private:
  double span() const { return std::log(beta_ / alpha_); }
  double alpha_, beta_;
};

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Uniform: return "Uniform";
    case Family::Exponential: return "Exponential";
    case Family::Power: return "Power";
    case Family::ParetoI: return "ParetoI";
    case Family::Lomax: return "Lomax";
    case Family::Weibull: return "Weibull";
    case Family::BurrIII: return "BurrIII";
    case Family::LogisticExponential: return "LogisticExponential";
    case Family::LogUniform: return "LogUniform";
    case Family::Derived: return "Derived";
  }
  return "Unknown";
}

double DistributionModel::log_pdf(double x) const { return std::log(pdf(x)); }
double DistributionModel::sf(double x) const { return 1.0 - cdf(x); }
double DistributionModel::log_sf(double x) const { return std::log(sf(x)); }
double DistributionModel::survival_quantile(double q) const { return quantile(1.0 - q); }

Distribution::Distribution(std::shared_ptr<const DistributionModel> model)
    : model_(std::move(model)) {
  if (!model_) throw Error(ErrorCode::DegenerateParameter, "null distribution model");
  support_ = model_->support();
}

Distribution Distribution::uniform(double a, double b) {
  return Distribution(std::make_shared<UniformModel>(a, b));
}
Distribution Distribution::exponential(double lambda) {
  return Distribution(std::make_shared<ExponentialModel>(lambda));
}
Distribution Distribution::power(double k, double b) {
  return Distribution(std::make_shared<PowerModel>(k, b));
}
Distribution Distribution::pareto1(double alpha, double beta) {
  return Distribution(std::make_shared<ParetoModel>(alpha, beta));
}
Distribution Distribution::lomax(double a, double b) {
  return Distribution(std::make_shared<LomaxModel>(a, b));
}
Distribution Distribution::weibull(double c) {
  return Distribution(std::make_shared<WeibullModel>(c));
}
Distribution Distribution::burr3(double alpha, double beta) {
  return Distribution(std::make_shared<BurrIIIModel>(alpha, beta));
}
Distribution Distribution::logistic_exponential(double alpha, double lambda) {
  return Distribution(std::make_shared<LogisticExponentialModel>(alpha, lambda));
}
Distribution Distribution::log_uniform(double alpha, double beta) {
  return Distribution(std::make_shared<LogUniformModel>(alpha, beta));
}

double Distribution::param(std::string_view name) const {
  for (const auto& p : model_->parameters()) {
    if (p.name == name) return p.value;
  }
  throw Error(ErrorCode::DegenerateParameter,
              spec() + " has no parameter named '" + std::string(name) + "'");
}

double Distribution::pdf(double x) const {
  if (x < support_.lower || x > support_.upper) return 0.0;
  return model_->pdf(x);
}
double Distribution::log_pdf(double x) const {
  if (x < support_.lower || x > support_.upper) return -kInfinity;
  return model_->log_pdf(x);
}
double Distribution::cdf(double x) const {
  if (x <= support_.lower) return 0.0;
  if (x >= support_.upper) return 1.0;
  return model_->cdf(x);
}
double Distribution::sf(double x) const {
  if (x <= support_.lower) return 1.0;
  if (x >= support_.upper) return 0.0;
  return model_->sf(x);
}
double Distribution::log_sf(double x) const {
  if (x <= support_.lower) return 0.0;
  if (x >= support_.upper) return -kInfinity;
  return model_->log_sf(x);
}
double Distribution::quantile(double p) const {
  if (p <= 0.0) return support_.lower;
  if (p >= 1.0) return support_.upper;
  return model_->quantile(p);
}
double Distribution::survival_quantile(double q) const {
  if (q >= 1.0) return support_.lower;
  if (q <= 0.0) return support_.upper;
  return model_->survival_quantile(q);
}
double Distribution::hazard(double x) const {
  const double ls = log_sf(x);
  if (ls == -kInfinity) return kInfinity;
  return std::exp(log_pdf(x) - ls);
}
double Distribution::cumhazard_inverse(double h) const { return survival_quantile(std::exp(-h)); }

double evaluate(const Distribution& dist, Function fn, double x) {
  const Support s = dist.support();
  auto fail = [&](const char* domain) {
    std::ostringstream msg;
    msg << "x = " << x << " outside " << domain << " of " << dist.spec();
    throw Error(ErrorCode::OutOfSupport, msg.str());
  };
  if (std::isnan(x)) fail("the domain");
  switch (fn) {
    case Function::Quantile:
      if (x < 0.0 || x > 1.0) fail("[0, 1]");
      return dist.quantile(x);
    case Function::Pdf:
      if (!s.contains(x)) fail("the support");
      return dist.pdf(x);
    case Function::Cdf:
      if (!s.contains(x)) fail("the support");
      return dist.cdf(x);
    case Function::Sf:
      if (!s.contains(x)) fail("the support");
      return dist.sf(x);
    case Function::Hazard:
    case Function::CumHazard:
      if (!s.contains(x)) fail("the support");
      if (!(dist.sf(x) > 0.0)) fail("the positive-survival region");
      return fn == Function::Hazard ? dist.hazard(x) : dist.cumhazard(x);
  }
  return 0.0;
}

Distribution parse_distribution(std::string_view text) {
  const auto colon = text.find(':');
  const std::string key(text.substr(0, colon));
  std::map<std::string, double, std::less<>> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::ParseError, "expected name=value in '" + std::string(item) + "'");
      }
      const std::string_view name = item.substr(0, eq);
      const std::string_view num = item.substr(eq + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw Error(ErrorCode::ParseError, "bad number '" + std::string(num) + "'");
      }
      kv[std::string(name)] = v;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto get = [&](const char* name) {
    const auto it = kv.find(name);
    if (it == kv.end()) {
      throw Error(ErrorCode::ParseError, key + " needs parameter '" + name + "'");
    }
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto get_or = [&](const char* name, double fallback) {
    return kv.count(name) ? get(name) : fallback;
  };
  auto finish = [&](Distribution d) {
    if (!kv.empty()) {
      throw Error(ErrorCode::ParseError, "unknown parameter '" + kv.begin()->first + "' for " + key);
    }
    return d;
  };
  if (key == "unif" || key == "uniform") {
    const double a = get("a");
    return finish(Distribution::uniform(a, get("b")));
  }
  if (key == "exp" || key == "exponential") return finish(Distribution::exponential(get("lambda")));
  if (key == "power") {
    const double k = get("k");
    return finish(Distribution::power(k, get_or("b", 1.0)));
  }
  if (key == "pareto" || key == "pareto1") {
    const double a = get("alpha");
    return finish(Distribution::pareto1(a, get("beta")));
  }
  if (key == "lomax") {
    const double a = get("a");
    return finish(Distribution::lomax(a, get("b")));
  }
  if (key == "weibull") return finish(Distribution::weibull(get("c")));
  if (key == "burr3") {
    const double a = get("alpha");
    return finish(Distribution::burr3(a, get("beta")));
  }
  if (key == "logexp") {
    const double a = get("alpha");
    return finish(Distribution::logistic_exponential(a, get("lambda")));
  }
  if (key == "logunif" || key == "loguniform") {
    const double a = get("alpha");
    return finish(Distribution::log_uniform(a, get("beta")));
  }
  throw Error(ErrorCode::ParseError, "unknown distribution family '" + key + "'");
}

QuadratureResult integrate_tail(const Distribution& dist, double t, const Integrand& g,
                                const QuadratureConfig& cfg) {
  const Support s = dist.support();
  const double lo = std::max(t, s.lower);
  const double st = dist.sf(lo);
  if (!(st > kSurvivalFloor)) {
    std::ostringstream msg;
    msg << "survival " << st << " at t = " << t << " for " << dist.spec();
    throw Error(ErrorCode::TailUnderflow, msg.str());
  }
  if (s.bounded()) return integrate(g, lo, s.upper, cfg);
  return integrate(g, lo, kInfinity, cfg,
                   [&](double p) { return dist.survival_quantile((1.0 - p) * st); });
}

double moment_conditional(const Distribution& dist, int power, double t,
                          const QuadratureConfig& cfg) {
  if (power != 1 && power != 2) {
    throw Error(ErrorCode::DegenerateParameter, "conditional moment power must be 1 or 2");
  }
  const double st = dist.sf(t);
  const auto r = integrate_tail(
      dist, t,
      [&](double x) {
        const double f = dist.pdf(x);
        return (power == 1 ? x : x * x) * f;
      },
      cfg);
  return r.value / st;
}

double mrl(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  const double lo = std::max(t, dist.support().lower);
  const double st = dist.sf(lo);
  try {
    // mu(t) = E[X | X > t] - t, written as the integral of sf(x) / sf(t).
    const double gap = lo - t;
    const auto r = integrate_tail(dist, t, [&](double x) { return dist.sf(x) / st; }, cfg);
    return gap + r.value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonConvergence) throw Error(ErrorCode::NonfiniteMoment, e.what());
    throw;
  }
}

double vrl(const Distribution& dist, double t, const QuadratureConfig& cfg) {
  const double mu = mrl(dist, t, cfg);
  const double st = dist.sf(std::max(t, dist.support().lower));
  try {
    const auto r = integrate_tail(
        dist, t,
        [&](double x) {
          const double d = x - t - mu;
          return d * d * dist.pdf(x) / st;
        },
        cfg);
    return std::max(0.0, r.value);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonConvergence) throw Error(ErrorCode::NonfiniteMoment, e.what());
    throw;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleSeed derive_seed(SampleSeed seed, std::uint64_t stream) {
  return {splitmix64(splitmix64(seed.value) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

double RandomStream::uniform_open() {
  // Top 53 bits, shifted by half a unit: strictly inside (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t RandomStream::index_below(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptySample, "index_below(0)");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = 0;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

std::vector<double> Sampler::draw(std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next());
  return out;
}

std::vector<double> sample(const Distribution& dist, std::size_t n, SampleSeed seed) {
  if (n == 0) throw Error(ErrorCode::DegenerateParameter, "sample size must be at least 1");
  Sampler sampler(dist, seed);
  return sampler.draw(n);
}

}  // namespace wvarent
