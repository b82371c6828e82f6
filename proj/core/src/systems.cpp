#include "wvarent/systems.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "detail/expect.hpp"
#include "wvarent/error.hpp"
#include "wvarent/interpolation.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/weight.hpp"

namespace wvarent {

namespace {

const double kLogFloor = std::log(detail::kDensityFloor);

double log_binomial(int n, int j) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
}

// Sum over j in [from, to) of C(n, j) ubar^j u^(n - j).
double binomial_sum(int n, int from, int to, double u, double ubar) {
  double s = 0.0;
  for (int j = from; j < to; ++j) {
    s += std::exp(log_binomial(n, j)) * std::pow(ubar, j) * std::pow(u, n - j);
  }
  return s;
}

// Smallest-exponent bisection on log x for an increasing g on (0, 1].
double invert_increasing(const std::function<double(double)>& g, double target) {
  double lo = -745.0;
  double hi = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(std::exp(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

class DistortedModel final : public DistributionModel {
 public:
  DistortedModel(Distribution base, DistortionFunction q) : base_(std::move(base)), q_(std::move(q)) {}

  std::string spec() const override { return "system(" + q_.label() + ")[" + base_.spec() + "]"; }
  Support support() const override { return base_.support(); }
  double pdf(double x) const override { return std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    const double d = q_.derivative(base_.cdf(x), base_.sf(x));
    return std::log(d) + base_.log_pdf(x);
  }
  double cdf(double x) const override { return q_.q(base_.cdf(x), base_.sf(x)); }
  double sf(double x) const override { return q_.qbar(base_.cdf(x), base_.sf(x)); }
  double log_sf(double x) const override { return std::log(sf(x)); }
  double quantile(double p) const override {
    if (p <= 0.0) return support().lower;
    if (p >= 1.0) return support().upper;
    if (p <= 0.5) {
      const double u = invert_increasing([&](double u) { return q_.q(u, 1.0 - u); }, p);
      return base_.quantile(u);
    }
    return survival_quantile(1.0 - p);
  }
  double survival_quantile(double s) const override {
    if (s <= 0.0) return support().upper;
    if (s >= 1.0) return support().lower;
    if (s <= 0.5) {
      const double v = invert_increasing([&](double v) { return q_.qbar(1.0 - v, v); }, s);
      return base_.survival_quantile(v);
    }
    return quantile(1.0 - s);
  }

 private:
  Distribution base_;
  DistortionFunction q_;
};

// int_0^1 g(u, 1 - u) du with the upper half parametrized by 1 - u.
double u_integral(const std::function<double(double, double)>& g, const QuadratureConfig& cfg) {
  const double lower = integrate([&](double u) { return g(u, 1.0 - u); }, 0.0, 0.5, cfg).value;
  const double upper = integrate([&](double v) { return g(1.0 - v, v); }, 0.0, 0.5, cfg).value;
  return lower + upper;
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

int parse_count(const std::string& s, const std::string& text) {
  double v = 0.0;
  if (!parse_double(s, v) || v != std::floor(v) || v < 1.0 || v > 1e6) {
    throw Error(ErrorCode::ParseError, "bad count '" + s + "' in structure '" + text + "'");
  }
  return static_cast<int>(v);
}

DistortionFunction load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open structure table " + path);
  std::vector<double> us;
  std::vector<double> qs;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto sep = line.find_first_of(", \t", line.find_first_not_of(" \t"));
    double u = 0.0;
    double qv = 0.0;
    const bool ok = sep != std::string::npos &&
                    parse_double(std::string_view(line).substr(0, sep), u) &&
                    parse_double(std::string_view(line).substr(sep + 1), qv);
    if (!ok) {
      if (us.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw Error(ErrorCode::ParseError, path + ", line " + std::to_string(line_no) + ": expected 'u,q'");
    }
    us.push_back(u);
    qs.push_back(qv);
  }
  if (us.size() < 2) throw Error(ErrorCode::ParseError, path + ": need at least two rows");
  return DistortionFunction::tabulated(std::move(us), std::move(qs), "table:" + path);
}

}  // namespace

DistortionFunction::DistortionFunction(PairFn q, PairFn qbar, PairFn derivative, std::string label)
    : q_(std::move(q)), qbar_(std::move(qbar)), dq_(std::move(derivative)), label_(std::move(label)) {
  if (!q_ || !qbar_ || !dq_) throw Error(ErrorCode::InvalidStructure, "distortion needs q, 1 - q and q'");
  validate();
}

DistortionFunction DistortionFunction::k_out_of_n(int k, int n) {
  if (n < 1 || k < 1 || k > n) {
    throw Error(ErrorCode::InvalidStructure,
                "k-out-of-n needs 1 <= k <= n, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  // T <= x exactly when fewer than k components are still working.
  auto q = [k, n](double u, double ub) { return binomial_sum(n, 0, k, u, ub); };
  auto qbar = [k, n](double u, double ub) { return binomial_sum(n, k, n + 1, u, ub); };
  const double log_c = std::log(static_cast<double>(n)) + log_binomial(n - 1, k - 1);
  auto dq = [k, n, log_c](double u, double ub) {
    return std::exp(log_c) * std::pow(u, n - k) * std::pow(ub, k - 1);
  };
  return {q, qbar, dq, "koutofn:" + std::to_string(k) + "," + std::to_string(n)};
}

DistortionFunction DistortionFunction::series(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidStructure, "series needs n >= 1");
  return {[n](double u, double ub) { return u <= 0.5 ? -std::expm1(n * std::log1p(-u)) : 1.0 - std::pow(ub, n); },
          [n](double, double ub) { return std::pow(ub, n); },
          [n](double, double ub) { return n * std::pow(ub, n - 1); }, "series:" + std::to_string(n)};
}

DistortionFunction DistortionFunction::parallel(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidStructure, "parallel needs n >= 1");
  return {[n](double u, double) { return std::pow(u, n); },
          [n](double u, double ub) { return u <= 0.5 ? -std::expm1(n * std::log(u)) : -std::expm1(n * std::log1p(-ub)); },
          [n](double u, double) { return n * std::pow(u, n - 1); }, "parallel:" + std::to_string(n)};
}

DistortionFunction DistortionFunction::identity() {
  return {[](double u, double) { return u; }, [](double, double ub) { return ub; },
          [](double, double) { return 1.0; }, "identity"};
}

DistortionFunction DistortionFunction::tabulated(std::vector<double> u, std::vector<double> q,
                                                 std::string label) {
  if (u.size() != q.size() || u.size() < 2) {
    throw Error(ErrorCode::InvalidStructure, "table needs matching u and q columns with >= 2 rows");
  }
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!(u[i] > u[i - 1])) throw Error(ErrorCode::InvalidStructure, "table u values must increase");
  }
  if (std::abs(u.front()) > 1e-12 || std::abs(u.back() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidStructure, "table must span u = 0 to u = 1");
  }
  auto curve = std::make_shared<const MonotoneCubic>(std::move(u), std::move(q));
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  return {[curve, clamp01](double uu, double) { return clamp01(curve->value(uu)); },
          [curve, clamp01](double uu, double) { return clamp01(1.0 - curve->value(uu)); },
          [curve](double uu, double) { return std::max(0.0, curve->derivative(uu)); }, std::move(label)};
}

void DistortionFunction::validate() const {
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::InvalidStructure, label_ + ": " + why); };
  if (std::abs(q_(0.0, 1.0)) > 1e-12) fail("q(0) != 0");
  if (std::abs(q_(1.0, 0.0) - 1.0) > 1e-12) fail("q(1) != 1");
  double prev = 0.0;
  constexpr int kGrid = 1000;
  for (int i = 0; i <= kGrid; ++i) {
    const double u = static_cast<double>(i) / kGrid;
    const double v = q_(u, 1.0 - u);
    if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) fail("q leaves [0, 1]");
    if (v < prev - 1e-12) fail("q decreases near u = " + std::to_string(u));
    prev = v;
  }
}

DistortionFunction parse_structure(const std::string& text) {
  const auto colon = text.find(':');
  const std::string key = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (key == "identity" && rest.empty()) return DistortionFunction::identity();
  if (colon == std::string::npos || rest.empty()) {
    throw Error(ErrorCode::ParseError, "structure '" + text + "' needs arguments");
  }
  if (key == "series") return DistortionFunction::series(parse_count(rest, text));
  if (key == "parallel") return DistortionFunction::parallel(parse_count(rest, text));
  if (key == "koutofn") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "koutofn needs k,n");
    return DistortionFunction::k_out_of_n(parse_count(rest.substr(0, comma), text),
                                          parse_count(rest.substr(comma + 1), text));
  }
  if (key == "table") return load_table(rest);
  throw Error(ErrorCode::ParseError, "unknown structure '" + key + "'");
}

Distribution distorted(const Distribution& component, const DistortionFunction& q) {
  return Distribution(std::make_shared<DistortedModel>(component, q));
}

double PhiPsi::quantile(double u, double ubar) const {
  return u <= 0.5 ? dist_.quantile(u) : dist_.survival_quantile(ubar);
}

double PhiPsi::phi(double u, double ubar) const {
  const double x = quantile(u, ubar);
  const double lf = dist_.log_pdf(x);
  if (!(lf > kLogFloor)) return 0.0;
  const double xl = x * lf;
  return std::exp(lf) * xl * xl;
}

double PhiPsi::psi(double u, double ubar) const {
  const double x = quantile(u, ubar);
  const double lf = dist_.log_pdf(x);
  if (!(lf > kLogFloor)) return 0.0;
  return -x * std::exp(lf) * lf;
}

double wve_coherent(const DistortionFunction& q, const Distribution& component, const QuadratureConfig& cfg) {
  const PhiPsi pp(component);
  // Information content of T at x = F^{-1}(u); the u-density is q'(u).
  auto ic = [&](double u, double ub, double& weight) {
    weight = q.derivative(u, ub);
    if (!(weight > 0.0)) return 0.0;
    const double x = pp.quantile(u, ub);
    const double lft = std::log(weight) + component.log_pdf(x);
    if (!(lft > kLogFloor)) {
      weight = 0.0;
      return 0.0;
    }
    return -x * lft;
  };
  const double h = u_integral([&](double u, double ub) {
    double w = 0.0;
    const double v = ic(u, ub, w);
    return w * v;
  }, cfg);
  return u_integral([&](double u, double ub) {
    double w = 0.0;
    const double d = ic(u, ub, w) - h;
    return w > 0.0 ? w * d * d : 0.0;
  }, cfg);
}

double wve_coherent_xspace(const DistortionFunction& q, const Distribution& component,
                           const QuadratureConfig& cfg) {
  return weighted_varentropy(distorted(component, q), WeightFunction::identity(), cfg);
}

double wve_coherent_transcribed(const DistortionFunction& q, const Distribution& component,
                                const QuadratureConfig& cfg) {
  const PhiPsi pp(component);
  auto over_f = [&](double u, double ub, bool second) {
    const double lf = component.log_pdf(pp.quantile(u, ub));
    if (!(lf > kLogFloor)) return 0.0;
    const double qu = q.q(u, ub);
    const double qb = q.qbar(u, ub);
    return (second ? pp.phi(qu, qb) : pp.psi(qu, qb)) / std::exp(lf);
  };
  const double m2 = u_integral([&](double u, double ub) { return over_f(u, ub, true); }, cfg);
  const double m1 = u_integral([&](double u, double ub) { return over_f(u, ub, false); }, cfg);
  return m2 - m1 * m1;
}

double closed_form_parallel2_power(double k, double a) {
  return closed_form_wve(Distribution::power(2.0 * k, a));
}

double closed_form_parallel2_power_transcribed(double k, double a) {
  if (!(k > 0.0) || !(a > 0.0)) throw Error(ErrorCode::DegenerateParameter, "need k > 0 and a > 0");
  const double l = std::log(k / a);
  const double c3 = 2.0 + 3.0 / k;
  const double c1 = 2.0 + 1.0 / k;
  const double m = 1.0 - 1.0 / k;
  const double b3 = l - 2.0 * m / c3;
  const double b1 = l - 2.0 * m / c1;
  return a * a / c3 * b3 * b3 + 4.0 * a * a * m * m / (c3 * c3 * c3) - (a / c1) * (a / c1) * b1 * b1;
}

ComparisonVerdict wve_comparison_condition(const DistortionFunction& q, const Distribution& component,
                                           const QuadratureConfig& cfg) {
  constexpr double kTol = 1e-10;
  constexpr int kGrid = 10000;
  const PhiPsi pp(component);
  ComparisonVerdict v;
  v.phi_dominates = v.phi_dominated = v.psi_dominates = v.psi_dominated = true;
  for (int i = 0; i < kGrid; ++i) {
    const double u = (i + 0.5) / kGrid;
    const double ub = 1.0 - u;
    const double qu = q.q(u, ub);
    const double qb = q.qbar(u, ub);
    const double dphi = pp.phi(qu, qb) - pp.phi(u, ub);
    const double dpsi = pp.psi(qu, qb) - pp.psi(u, ub);
    if (dphi < -kTol) v.phi_dominates = false;
    if (dphi > kTol) v.phi_dominated = false;
    if (dpsi < -kTol) v.psi_dominates = false;
    if (dpsi > kTol) v.psi_dominated = false;
  }
  if (v.phi_dominates && v.phi_dominated && v.psi_dominates && v.psi_dominated) {
    v.conclusion = Ordering::Equal;
  } else if (v.phi_dominates && v.psi_dominated) {
    v.conclusion = Ordering::Greater;
  } else if (v.phi_dominated && v.psi_dominates) {
    v.conclusion = Ordering::Less;
  }
  v.wve_system = wve_coherent(q, component, cfg);
  v.wve_system_transcribed = wve_coherent_transcribed(q, component, cfg);
  v.wve_component = weighted_varentropy(component, WeightFunction::identity(), cfg);
  auto holds = [&](double sys) {
    const double slack = 1e-7 * std::max(1.0, std::abs(v.wve_component));
    switch (*v.conclusion) {
      case Ordering::Greater: return sys >= v.wve_component - slack;
      case Ordering::Less: return sys <= v.wve_component + slack;
      case Ordering::Equal: return std::abs(sys - v.wve_component) <= slack;
    }
    return false;
  };
  if (v.conclusion) {
    v.verified = holds(v.wve_system);
    v.verified_transcribed = holds(v.wve_system_transcribed);
  }
  return v;
}

CoherentBounds wve_coherent_bounds(const DistortionFunction& q, const Distribution& component, double alpha,
                                   double beta, std::optional<double> floor_l, const QuadratureConfig& cfg) {
  const PhiPsi pp(component);
  CoherentBounds b;
  auto ratio = [&](double u, double ub, bool& ok) {
    const double den = pp.phi(u, ub);
    const double r = pp.phi(q.q(u, ub), q.qbar(u, ub)) / den;
    ok = den > 0.0 && std::isfinite(r);
    return r;
  };
  constexpr int kGrid = 10000;
  bool any = false;
  double sup = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double u = (i + 0.5) / kGrid;
    bool ok = false;
    const double r = ratio(u, 1.0 - u, ok);
    if (!ok) {
      ++b.ratio_singular_points;
      continue;
    }
    any = true;
    sup = std::max(sup, r);
  }
  if (!any) throw Error(ErrorCode::RatioSingularity, "phi(u) vanishes on the whole grid");
  double edge = 0.0;
  for (int k = 5; k <= 15; ++k) {
    const double e = std::pow(10.0, -k);
    bool ok = false;
    double r = ratio(e, 1.0 - e, ok);
    if (ok) edge = std::max(edge, r);
    r = ratio(1.0 - e, e, ok);
    if (ok) edge = std::max(edge, r);
  }
  b.boundary_growth = edge > sup;
  b.beta1u = std::max(sup, edge);

  const WeightFunction x = WeightFunction::identity();
  const double ve = weighted_varentropy(component, x, cfg);
  const double h = weighted_entropy(component, x, cfg);
  b.bound_wve = b.beta1u * (ve + h * h);

  b.envelope_holds = density_envelope_holds(component, alpha, beta);
  if (b.envelope_holds) {
    b.bound_wse = b.beta1u * weighted_entropy(component, WeightFunction::cubic_quad(alpha, beta), cfg);
  }
  if (floor_l) {
    const double l = *floor_l;
    if (!(l > 0.0)) throw Error(ErrorCode::DegenerateParameter, "density floor L must be positive");
    b.density_floor_holds = true;
    for (int i = 0; i < kGrid; ++i) {
      const double u = (i + 0.5) / kGrid;
      if (component.pdf(pp.quantile(u, 1.0 - u)) < l * (1.0 - 1e-12)) {
        b.density_floor_holds = false;
        break;
      }
    }
    if (b.density_floor_holds) {
      b.bound_density_floor =
          u_integral([&](double u, double ub) { return pp.phi(q.q(u, ub), q.qbar(u, ub)); }, cfg) / l;
    }
  }
  return b;
}

}  // namespace wvarent
