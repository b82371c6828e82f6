#include "wvarent/transforms.hpp"

#include <cmath>
#include <sstream>

#include "detail/expect.hpp"
#include "wvarent/error.hpp"
#include "wvarent/format.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/residual.hpp"

namespace wvarent {

namespace {

class TransformedModel final : public DistributionModel {
 public:
  TransformedModel(Distribution base, MonotoneMap map) : base_(std::move(base)), map_(std::move(map)) {
    const Support s = base_.support();
    const double a = map_(s.lower);
    const double b = map_(s.upper);
    support_ = map_.increasing() ? Support{a, b} : Support{b, a};
    if (!std::isfinite(support_.lower)) {
      throw Error(ErrorCode::DegenerateParameter, "transformed support must be bounded below");
    }
  }
  std::string spec() const override { return "map(" + map_.label() + ")[" + base_.spec() + "]"; }
  Support support() const override { return support_; }
  double pdf(double y) const override { return std::exp(log_pdf(y)); }
  double log_pdf(double y) const override {
    const double x = map_.inverse(y);
    return base_.log_pdf(x) - std::log(std::abs(map_.derivative(x)));
  }
  double cdf(double y) const override {
    const double x = map_.inverse(y);
    return map_.increasing() ? base_.cdf(x) : base_.sf(x);
  }
  double sf(double y) const override {
    const double x = map_.inverse(y);
    return map_.increasing() ? base_.sf(x) : base_.cdf(x);
  }
  double log_sf(double y) const override {
    const double x = map_.inverse(y);
    return map_.increasing() ? base_.log_sf(x) : std::log(base_.cdf(x));
  }
  double quantile(double p) const override {
    return map_.increasing() ? map_(base_.quantile(p)) : map_(base_.survival_quantile(p));
  }
  double survival_quantile(double q) const override {
    return map_.increasing() ? map_(base_.survival_quantile(q)) : map_(base_.quantile(q));
  }

 private:
  Distribution base_;
  MonotoneMap map_;
  Support support_;
};

using Fn = std::function<double(double)>;

// Pieces shared by every monotone-map identity on one region of X.
struct BranchTerms {
  double ve_phi;
  double h_phi;
  double e_eta;
  double var_eta;
  double e_phi_eta_logf;
};

BranchTerms branch_terms(const Distribution& dist, const detail::Region& region, const Fn& phi,
                         const Fn& eta, const QuadratureConfig& cfg) {
  BranchTerms b{};
  const auto im = detail::info_moments(dist, region, phi, cfg);
  b.ve_phi = im.variance;
  b.h_phi = im.entropy;
  b.e_eta = detail::expect(dist, region, [&](double x, double) { return eta(x); }, cfg).value;
  const double m = b.e_eta;
  b.var_eta = detail::expect(dist, region, [&](double x, double) {
                const double d = eta(x) - m;
                return d * d;
              }, cfg).value;
  b.e_phi_eta_logf = detail::expect(dist, region, [&](double x, double lfr) {
                       return phi(x) * eta(x) * lfr;
                     }, cfg).value;
  return b;
}

double combine(const BranchTerms& b) {
  return b.ve_phi + b.var_eta - 2.0 * b.e_phi_eta_logf - 2.0 * b.h_phi * b.e_eta;
}

Fn eta_of(const MonotoneMap& map) {
  return [&map](double x) { return map(x) * std::log(std::abs(map.derivative(x))); };
}

detail::Region whole(const Distribution& dist) { return detail::upper_region(dist, dist.support().lower); }

struct AffineTerms {
  double ve_w1;
  double h_w1;
  double h_w1sq;
  double mean_w1;
  double var_w1;
};

AffineTerms affine_terms(const Distribution& dist, const detail::Region& region, double a, double b,
                         const QuadratureConfig& cfg) {
  const Fn w1 = [a, b](double x) { return a * x + b; };
  AffineTerms t{};
  const auto im = detail::info_moments(dist, region, w1, cfg);
  t.ve_w1 = im.variance;
  t.h_w1 = im.entropy;
  t.h_w1sq = detail::expect(dist, region, [&](double x, double lfr) {
               const double w = w1(x);
               return -w * w * lfr;
             }, cfg).value;
  t.mean_w1 = detail::expect(dist, region, [&](double x, double) { return w1(x); }, cfg).value;
  const double m = t.mean_w1;
  t.var_w1 = detail::expect(dist, region, [&](double x, double) {
               const double d = w1(x) - m;
               return d * d;
             }, cfg).value;
  return t;
}

void require_positive_scale(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::DegenerateParameter, "affine identity requires a > 0");
  }
}

void require_nonnegative_image(const Distribution& dist, double a, double b) {
  if (a * dist.support().lower + b < 0.0) {
    throw Error(ErrorCode::DegenerateParameter, "aX + b must stay nonnegative on the support");
  }
}

}  // namespace

MonotoneMap::MonotoneMap(Fn phi, Fn derivative, Fn inverse, Direction direction, std::string label)
    : phi_(std::move(phi)), dphi_(std::move(derivative)), inv_(std::move(inverse)),
      direction_(direction), label_(std::move(label)) {
  if (!phi_ || !dphi_ || !inv_) throw Error(ErrorCode::DegenerateParameter, "map needs phi, phi' and inverse");
}

MonotoneMap MonotoneMap::identity() {
  return {[](double x) { return x; }, [](double) { return 1.0; }, [](double y) { return y; },
          Direction::Increasing, "identity"};
}

MonotoneMap MonotoneMap::affine(double a, double b) {
  if (!(a != 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DegenerateParameter, "affine map requires a != 0");
  }
  return {[a, b](double x) { return a * x + b; }, [a](double) { return a; },
          [a, b](double y) { return (y - b) / a; },
          a > 0 ? Direction::Increasing : Direction::Decreasing,
          "affine:" + format_number(a) + "," + format_number(b)};
}

MonotoneMap MonotoneMap::square() {
  return {[](double x) { return x * x; }, [](double x) { return 2.0 * x; },
          [](double y) { return std::sqrt(y); }, Direction::Increasing, "square"};
}

MonotoneMap MonotoneMap::reflect(double c) {
  return {[c](double x) { return c - x; }, [](double) { return -1.0; },
          [c](double y) { return c - y; }, Direction::Decreasing, "reflect:" + format_number(c)};
}

void MonotoneMap::check_direction(const Distribution& dist) const {
  for (int i = 1; i < 64; ++i) {
    const double x = dist.quantile(i / 64.0);
    const double d = derivative(x);
    const bool ok = increasing() ? d > 0.0 : d < 0.0;
    if (!ok) {
      std::ostringstream msg;
      msg << label_ << ": phi'(" << x << ") = " << d << " contradicts the declared "
          << (increasing() ? "increasing" : "decreasing") << " direction";
      throw Error(ErrorCode::BranchMismatch, msg.str());
    }
  }
}

Distribution transform(const Distribution& dist, const MonotoneMap& map) {
  map.check_direction(dist);
  return Distribution(std::make_shared<TransformedModel>(dist, map));
}

double wve_affine(const Distribution& dist, double a, double b, const QuadratureConfig& cfg) {
  require_positive_scale(a);
  require_nonnegative_image(dist, a, b);
  const AffineTerms t = affine_terms(dist, whole(dist), a, b, cfg);
  const double la = std::log(a);
  // Var(aX + b) = a^2 Var X.
  return t.ve_w1 + la * la * t.var_w1 + 2.0 * la * (t.h_w1sq - t.h_w1 * t.mean_w1);
}

double wve_scale(const Distribution& dist, double a, const QuadratureConfig& cfg) {
  require_positive_scale(a);
  const detail::Region r = whole(dist);
  const auto im = detail::info_moments(dist, r, [](double x) { return x; }, cfg);
  const double mean = detail::expect(dist, r, [](double x, double) { return x; }, cfg).value;
  const double var = detail::expect(dist, r, [&](double x, double) {
                       return (x - mean) * (x - mean);
                     }, cfg).value;
  const double x2logf = detail::expect(dist, r, [](double x, double lf) { return x * x * lf; }, cfg).value;
  const double la = std::log(a);
  return a * a * (im.variance + la * la * var - 2.0 * la * (im.entropy * mean + x2logf));
}

double wve_location(const Distribution& dist, double b, const QuadratureConfig& cfg) {
  const detail::Region r = whole(dist);
  const auto wx = detail::info_moments(dist, r, [](double x) { return x; }, cfg);
  const auto w1 = detail::info_moments(dist, r, [](double) { return 1.0; }, cfg);
  const double xlog2 = detail::expect(dist, r, [](double x, double lf) { return x * lf * lf; }, cfg).value;
  return wx.variance + b * b * w1.variance + 2.0 * b * (xlog2 - wx.entropy * w1.entropy);
}

double wve_location_transcribed(const Distribution& dist, double b, const QuadratureConfig& cfg) {
  return weighted_varentropy(dist, WeightFunction::identity(), cfg) - b * varentropy(dist, cfg);
}

double wve_monotone(const Distribution& dist, const MonotoneMap& map, const QuadratureConfig& cfg) {
  map.check_direction(dist);
  const Fn phi = [&map](double x) { return map(x); };
  return combine(branch_terms(dist, whole(dist), phi, eta_of(map), cfg));
}

double wve_monotone_transcribed(const Distribution& dist, const MonotoneMap& map,
                                const QuadratureConfig& cfg) {
  map.check_direction(dist);
  const Fn phi = [&map](double x) { return map(x); };
  const BranchTerms b = branch_terms(dist, whole(dist), phi, eta_of(map), cfg);
  if (map.increasing()) return combine(b);
  return -b.ve_phi - b.var_eta + 2.0 * b.e_phi_eta_logf - 2.0 * b.h_phi * b.h_phi -
         2.0 * b.h_phi * b.e_eta - 2.0 * b.e_eta * b.e_eta;
}

double wrve_monotone(const Distribution& dist, const MonotoneMap& map, double t,
                     const QuadratureConfig& cfg) {
  map.check_direction(dist);
  const double s = map.inverse(t);
  const detail::Region region =
      map.increasing() ? detail::upper_region(dist, s) : detail::lower_region(dist, s);
  const Fn phi = [&map](double x) { return map(x); };
  return combine(branch_terms(dist, region, phi, eta_of(map), cfg));
}

double wrve_affine(const Distribution& dist, double a, double b, double t, const QuadratureConfig& cfg) {
  require_positive_scale(a);
  require_nonnegative_image(dist, a, b);
  const AffineTerms r = affine_terms(dist, detail::upper_region(dist, (t - b) / a), a, b, cfg);
  const double la = std::log(a);
  return r.ve_w1 + la * la * r.var_w1 + 2.0 * la * (r.h_w1sq - r.h_w1 * r.mean_w1);
}

double wrve_affine_transcribed(const Distribution& dist, double a, double b, double t,
                               const QuadratureConfig& cfg) {
  require_positive_scale(a);
  require_nonnegative_image(dist, a, b);
  const AffineTerms r = affine_terms(dist, detail::upper_region(dist, (t - b) / a), a, b, cfg);
  const double la = std::log(a);
  return r.ve_w1 + la * la * r.mean_w1 * (1.0 - r.mean_w1) - 2.0 * la * r.h_w1 * (1.0 + r.mean_w1);
}

double wve_direct(const Distribution& dist, const MonotoneMap& map, const QuadratureConfig& cfg) {
  return weighted_varentropy(transform(dist, map), WeightFunction::identity(), cfg);
}

double wrve_direct(const Distribution& dist, const MonotoneMap& map, double t, const QuadratureConfig& cfg) {
  return wrve({transform(dist, map), t, WeightFunction::identity()}, cfg);
}

}  // namespace wvarent
