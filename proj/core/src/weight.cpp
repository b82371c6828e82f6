#include "wvarent/weight.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "wvarent/error.hpp"
#include "wvarent/format.hpp"

namespace wvarent {

WeightFunction::WeightFunction(Form form, double c0, double c1, std::string label)
    : form_(form), c0_(c0), c1_(c1), label_(std::move(label)) {}

WeightFunction WeightFunction::identity() { return {Form::Identity, 0, 0, "x"}; }
WeightFunction WeightFunction::square() { return {Form::Square, 0, 0, "x2"}; }
WeightFunction WeightFunction::unit() { return {Form::Unit, 0, 0, "unit"}; }

WeightFunction WeightFunction::affine(double a, double b) {
  if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DegenerateParameter, "affine weight requires a > 0 and b >= 0");
  }
  return {Form::Affine, a, b, "affine:" + format_number(a) + "," + format_number(b)};
}

WeightFunction WeightFunction::cubic_quad(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorCode::DegenerateParameter,
                "cubic-quadratic weight requires alpha > 0 and beta >= 0");
  }
  return {Form::CubicQuad, alpha, beta,
          "cubquad:" + format_number(alpha) + "," + format_number(beta)};
}

WeightFunction WeightFunction::custom(std::function<double(double)> fn, std::string label) {
  if (!fn) throw Error(ErrorCode::DegenerateParameter, "custom weight needs a callable");
  if (label.empty()) throw Error(ErrorCode::DegenerateParameter, "custom weight needs a label");
  WeightFunction w(Form::Custom, 0, 0, std::move(label));
  w.fn_ = std::move(fn);
  return w;
}

double WeightFunction::operator()(double x) const {
  switch (form_) {
    case Form::Identity: return x;
    case Form::Square: return x * x;
    case Form::Affine: return c0_ * x + c1_;
    case Form::CubicQuad: return (c0_ * x + c1_) * x * x;
    case Form::Unit: return 1.0;
    case Form::Custom: return fn_(x);
  }
  return 0.0;
}

WeightFunction WeightFunction::squared() const {
  switch (form_) {
    case Form::Identity: return square();
    case Form::Unit: return unit();
    default: {
      WeightFunction self = *this;
      return custom([self](double x) { const double v = self(x); return v * v; },
                    "(" + label_ + ")^2");
    }
  }
}

WeightFunction parse_weight(std::string_view text) {
  if (text == "x") return WeightFunction::identity();
  if (text == "x2") return WeightFunction::square();
  if (text == "unit" || text == "1") return WeightFunction::unit();
  const auto colon = text.find(':');
  const std::string_view key = text.substr(0, colon);
  if (colon == std::string_view::npos || (key != "affine" && key != "cubquad")) {
    throw Error(ErrorCode::ParseError, "unknown weight '" + std::string(text) +
                                           "' (expected x, x2, unit, affine:a,b, cubquad:alpha,beta)");
  }
  std::vector<double> args;
  std::string_view rest = text.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
      throw Error(ErrorCode::ParseError, "bad weight argument '" + std::string(tok) + "'");
    }
    args.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (args.size() != 2) throw Error(ErrorCode::ParseError, std::string(key) + " takes two arguments");
  return key == "affine" ? WeightFunction::affine(args[0], args[1])
                         : WeightFunction::cubic_quad(args[0], args[1]);
}

}  // namespace wvarent
