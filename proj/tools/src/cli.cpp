#include "wvarent_cli/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wvarent/datasets.hpp"
#include "wvarent/distributions.hpp"
#include "wvarent/erratum.hpp"
#include "wvarent/error.hpp"
#include "wvarent/estimation.hpp"
#include "wvarent/format.hpp"
#include "wvarent/measures.hpp"
#include "wvarent/phr.hpp"
#include "wvarent/residual.hpp"
#include "wvarent/systems.hpp"
#include "wvarent/transforms.hpp"
#include "wvarent/weight.hpp"

namespace wvarent::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::UsageError, what); }

// ---------------------------------------------------------------------------
// Option catalogue. Each subcommand lists its own options; the common ones
// (format, seed, tolerances, out, save-config) are added to every subcommand.

struct OptSpec {
  std::string name;
  std::string help;
  bool flag = false;
};

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<OptSpec> options;
  Format default_format;
};

const std::vector<Subcommand>& catalogue() {
  static const std::vector<Subcommand> subs = {
      {"measure",
       "WVE, WSE, varentropy or entropy of a distribution or a discrete model",
       {{"dist", "distribution spec, e.g. exp:lambda=2"},
        {"probs", "discrete probabilities p1,p2,... (instead of --dist)"},
        {"outcomes", "discrete outcomes (default 1,2,...)"},
        {"weights", "discrete weights: a list, or 'x' for the outcomes (default)"},
        {"weight", "weight for --dist: x | x2 | unit | affine:a,b | cubquad:alpha,beta (default x)"},
        {"measure", "comma list of H, WSE, VE, WVE, WVE_CF, VEX (default WVE)"}},
       Format::Json},
      {"residual",
       "residual-lifetime measures on a t grid",
       {{"dist", "distribution spec"},
        {"weight", "weight (default x)"},
        {"t", "t grid: scalar, list or start:stop:step"},
        {"measure",
         "comma list of WRSE, WRVE, WRVE_DEC, RVE, WRVE_CF, MRL, VRL, WRVE_UB, WRVE_LB, DWRVE, DWRVE_PRINTED, "
         "DWRVE_FD (default WRVE)"},
        {"alpha", "envelope alpha for WRVE_UB (default 1)"},
        {"beta", "envelope beta for WRVE_UB (default 2)"}},
       Format::Csv},
      {"transform",
       "WVE / WRVE of phi(X): identity side, direct quadrature and printed forms",
       {{"dist", "distribution spec of X"},
        {"map", "identity | affine:a,b | square | reflect:c"},
        {"t", "optional t grid for the residual version"}},
       Format::Csv},
      {"system",
       "WVE of a coherent-system lifetime",
       {{"structure", "series:n | parallel:n | koutofn:k,n | identity | table:path"},
        {"component", "component distribution spec"},
        {"bounds", "also report the bound suite", true},
        {"alpha", "envelope alpha (default 1)"},
        {"beta", "envelope beta (default 2)"},
        {"floor", "density floor L for the floor bound"}},
       Format::Csv},
      {"phr",
       "WRVE under the proportional hazard rate model",
       {{"baseline", "baseline distribution spec"},
        {"a", "proportionality constant (default 1)"},
        {"series-n", "series system size (sets a = n)"},
        {"t", "t grid"}},
       Format::Csv},
      {"simulate",
       "Monte-Carlo bias/MSE study of the kernel WRVE estimator",
       {{"dist", "true distribution spec"},
        {"t", "t grid"},
        {"n", "sample sizes (grid)"},
        {"reps", "replications (default 500)"},
        {"bandwidth", "silverman | fixed:<b> (default silverman)"},
        {"threads", "worker threads, 0 = all cores (default 0)"},
        {"reflect", "reflect the kernel estimate at 0", true}},
       Format::Csv},
      {"estimate",
       "bootstrap bias/MSE of the kernel WRVE estimator on a data set",
       {{"data", "builtin:nano | builtin:covid | path"},
        {"fitted", "fitted distribution spec for the reference value"},
        {"t", "t grid"},
        {"bn", "bandwidth"},
        {"bootstrap", "bootstrap resamples (default 600)"},
        {"threads", "worker threads, 0 = all cores (default 0)"},
        {"reflect", "reflect the kernel estimate at 0", true}},
       Format::Csv},
      {"curves",
       "plot data (series, t, WRVE, RVE) for a named preset or a custom curve",
       {{"preset", "uniform | exponential | power | exponential-wide | uniform-tail | phr-exponential"},
        {"dist", "distribution spec (custom curve)"},
        {"t", "t grid (custom curve)"}},
       Format::Csv},
      {"erratum", "printed expressions evaluated next to independent oracles", {}, Format::Csv},
  };
  return subs;
}

const Subcommand& find_sub(const std::string& name) {
  for (const auto& s : catalogue()) {
    if (s.name == name) return s;
  }
  usage("unknown subcommand '" + name + "'");
}

// ---------------------------------------------------------------------------
// Option access.

class Options {
 public:
  explicit Options(const RunConfig& cfg) : cfg_(cfg) {}

  bool has(const std::string& name) const { return cfg_.options.count(name) > 0; }
  std::string str(const std::string& name) const {
    auto it = cfg_.options.find(name);
    if (it == cfg_.options.end()) usage("--" + name + " is required for '" + cfg_.subcommand + "'");
    return it->second;
  }
  std::string str(const std::string& name, const std::string& fallback) const {
    return has(name) ? cfg_.options.at(name) : fallback;
  }
  double real(const std::string& name, std::optional<double> fallback = std::nullopt) const {
    if (!has(name)) {
      if (fallback) return *fallback;
      str(name);
    }
    return parse_real(name, cfg_.options.at(name));
  }
  std::size_t count(const std::string& name, std::size_t fallback) const {
    if (!has(name)) return fallback;
    const double v = real(name);
    if (v < 0 || v != std::floor(v) || v > 1e12) usage("--" + name + " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  bool flag(const std::string& name) const { return has(name) && cfg_.options.at(name) == "true"; }

  static double parse_real(const std::string& name, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last || first == last) {
      throw Error(ErrorCode::ParseError, "--" + name + ": '" + text + "' is not a number");
    }
    return v;
  }

 private:
  const RunConfig& cfg_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> parse_list(const std::string& name, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(Options::parse_real(name, part));
  if (out.empty()) throw Error(ErrorCode::ParseError, "--" + name + " is empty");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    if (v < 1 || v != std::floor(v)) throw Error(ErrorCode::ParseError, "--n: sample sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::string> measures(const Options& o, const std::vector<std::string>& allowed, const std::string& def) {
  std::vector<std::string> out;
  for (auto m : split(o.str("measure", def), ',')) {
    for (auto& c : m) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == m;
    if (!ok) usage("unknown measure '" + m + "'");
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

Report run_measure(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  Report rep;
  rep.table.columns = {"measure", "model", "weight", "value", "quad_error"};
  if (o.has("probs")) {
    if (o.has("dist")) usage("--probs and --dist are mutually exclusive");
    DiscreteModel m;
    m.probs = parse_list("probs", o.str("probs"));
    if (o.has("outcomes")) {
      m.outcomes = parse_list("outcomes", o.str("outcomes"));
    } else {
      for (std::size_t i = 0; i < m.probs.size(); ++i) m.outcomes.push_back(static_cast<double>(i + 1));
    }
    const std::string w = o.str("weights", "x");
    m.weights = w == "x" ? m.outcomes : parse_list("weights", w);
    m.validate();
    const std::string model = "discrete(" + o.str("probs") + ")";
    for (const auto& name : measures(o, {"H", "WSE", "VE", "WVE", "VEX"}, "WVE")) {
      double v = 0.0;
      if (name == "H") v = discrete_entropy(m);
      if (name == "WSE") v = discrete_weighted_entropy(m);
      if (name == "VE") v = discrete_varentropy(m);
      if (name == "WVE") v = discrete_weighted_varentropy(m);
      if (name == "VEX") v = varextropy(m);
      rep.table.rows.push_back({name, model, w, v, std::monostate{}});
    }
    return rep;
  }
  const Distribution d = parse_distribution(o.str("dist"));
  const WeightFunction w = parse_weight(o.str("weight", "x"));
  for (const auto& name : measures(o, {"H", "WSE", "VE", "WVE", "WVE_CF"}, "WVE")) {
    Cell value;
    Cell err = std::monostate{};
    if (name == "H") {
      value = shannon_entropy(d, q);
    } else if (name == "VE") {
      value = varentropy(d, q);
    } else if (name == "WSE") {
      const MeasureValue mv = weighted_entropy_detailed(d, w, q);
      value = mv.value;
      err = mv.quadrature_error;
    } else if (name == "WVE") {
      const MeasureValue mv = weighted_varentropy_detailed(d, w, q);
      value = mv.value;
      err = mv.quadrature_error;
    } else {
      if (w.label() != "x") usage("WVE_CF is defined for the weight x only");
      value = closed_form_wve(d);
      if (d.family() == Family::Power) {
        rep.erratum_notes.push_back("power-wve: the printed power-law WVE has a wrong final term; the corrected form is reported");
      }
    }
    rep.table.rows.push_back({name, d.spec(), w.label(), value, err});
  }
  return rep;
}

Report run_residual(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  const Distribution d = parse_distribution(o.str("dist"));
  const WeightFunction w = parse_weight(o.str("weight", "x"));
  const auto grid = parse_grid(o.str("t"));
  const auto names = measures(o,
                              {"WRSE", "WRVE", "WRVE_DEC", "RVE", "WRVE_CF", "MRL", "VRL", "WRVE_UB", "WRVE_LB",
                               "DWRVE", "DWRVE_PRINTED", "DWRVE_FD"},
                              "WRVE");
  const double alpha = o.real("alpha", 1.0);
  const double beta = o.real("beta", 2.0);
  Report rep;
  rep.table.columns = {"t", "measure", "value"};
  bool envelope_failed = false;
  for (double t : grid) {
    std::optional<DerivativeReport> deriv;
    for (const auto& name : names) {
      double v = 0.0;
      const ResidualQuery rq{d, t, w};
      if (name == "WRSE") v = wrse(rq, q);
      if (name == "WRVE") v = wrve(rq, q);
      if (name == "WRVE_DEC") v = wrve_decomposed(rq, q);
      if (name == "RVE") v = rve(d, t, q);
      if (name == "WRVE_CF") v = closed_form_wrve(d, t);
      if (name == "MRL") v = mrl(d, t, q);
      if (name == "VRL") v = vrl(d, t, q);
      if (name == "WRVE_LB") v = wrve_lower_bound(d, t, q);
      if (name == "WRVE_UB") {
        const BoundCheck b = wrve_upper_bound(d, t, alpha, beta, q);
        envelope_failed = envelope_failed || !b.condition_holds;
        v = b.bound;
      }
      if (name.rfind("DWRVE", 0) == 0) {
        if (!deriv) deriv = wrve_derivative(d, t, q);
        v = name == "DWRVE" ? deriv->corrected_value
            : name == "DWRVE_FD" ? deriv->finite_difference_value
                                 : deriv->formula_value;
      }
      rep.table.rows.push_back({t, name, v});
    }
  }
  for (const auto& name : names) {
    if (name == "WRSE") rep.erratum_notes.push_back("wrse-sign: WRSE carries the leading minus so that t -> 0 recovers the WSE");
    if (name == "WRVE_CF" && d.family() == Family::Power) {
      rep.erratum_notes.push_back("power-wrve: the printed power-law WRVE is misprinted; the corrected form is reported");
    }
    if (name == "DWRVE_PRINTED") {
      rep.erratum_notes.push_back("wrve-derivative: the printed derivative identity disagrees with finite differences");
    }
  }
  if (envelope_failed) rep.erratum_notes.push_back("WRVE_UB: the density envelope condition failed on at least one row; the bound is not guaranteed there");
  return rep;
}

MonotoneMap parse_map(const std::string& text) {
  if (text == "identity") return MonotoneMap::identity();
  if (text == "square") return MonotoneMap::square();
  const auto colon = text.find(':');
  const std::string key = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (key == "affine") {
    const auto v = parse_list("map", rest);
    if (v.size() != 2) throw Error(ErrorCode::ParseError, "affine map needs a,b");
    return MonotoneMap::affine(v[0], v[1]);
  }
  if (key == "reflect" && !rest.empty()) return MonotoneMap::reflect(Options::parse_real("map", rest));
  throw Error(ErrorCode::ParseError, "unknown map '" + text + "'");
}

Report run_transform(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  const Distribution d = parse_distribution(o.str("dist"));
  const std::string map_text = o.str("map");
  const MonotoneMap m = parse_map(map_text);
  std::optional<std::pair<double, double>> affine;
  if (map_text.rfind("affine:", 0) == 0) {
    const auto v = parse_list("map", map_text.substr(7));
    if (v[0] > 0.0) affine = {v[0], v[1]};
  }
  Report rep;
  rep.table.columns = {"t", "route", "value"};
  if (!o.has("t")) {
    rep.table.rows.push_back({std::monostate{}, "identity", wve_monotone(d, m, q)});
    rep.table.rows.push_back({std::monostate{}, "direct", wve_direct(d, m, q)});
    rep.table.rows.push_back({std::monostate{}, "printed", wve_monotone_transcribed(d, m, q)});
    if (affine) rep.table.rows.push_back({std::monostate{}, "affine", wve_affine(d, affine->first, affine->second, q)});
    if (!m.increasing()) {
      rep.erratum_notes.push_back("monotone-decreasing: the printed decreasing-map branch disagrees with direct quadrature");
    }
    return rep;
  }
  for (double t : parse_grid(o.str("t"))) {
    rep.table.rows.push_back({t, "identity", wrve_monotone(d, m, t, q)});
    rep.table.rows.push_back({t, "direct", wrve_direct(d, m, t, q)});
    if (affine) {
      rep.table.rows.push_back({t, "affine", wrve_affine(d, affine->first, affine->second, t, q)});
      rep.table.rows.push_back({t, "affine_printed", wrve_affine_transcribed(d, affine->first, affine->second, t, q)});
    }
  }
  if (affine) rep.erratum_notes.push_back("affine-residual: the printed affine corollary only holds for a = 1");
  return rep;
}

Report run_system(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  const DistortionFunction s = parse_structure(o.str("structure"));
  const Distribution c = parse_distribution(o.str("component"));
  Report rep;
  rep.table.columns = {"quantity", "value"};
  const double u = wve_coherent(s, c, q);
  rep.table.rows.push_back({"wve_system", u});
  rep.table.rows.push_back({"wve_system_xspace", wve_coherent_xspace(s, c, q)});
  rep.table.rows.push_back({"wve_system_printed", wve_coherent_transcribed(s, c, q)});
  rep.table.rows.push_back({"wve_component", weighted_varentropy(c, WeightFunction::identity(), q)});
  if (o.flag("bounds")) {
    std::optional<double> floor;
    if (o.has("floor")) floor = o.real("floor");
    const CoherentBounds b = wve_coherent_bounds(s, c, o.real("alpha", 1.0), o.real("beta", 2.0), floor, q);
    rep.table.rows.push_back({"beta1u", b.beta1u});
    rep.table.rows.push_back({"ratio_singular_points", static_cast<std::int64_t>(b.ratio_singular_points)});
    rep.table.rows.push_back({"boundary_growth", b.boundary_growth});
    rep.table.rows.push_back({"envelope_holds", b.envelope_holds});
    rep.table.rows.push_back({"bound_wse", b.bound_wse ? Cell{*b.bound_wse} : Cell{}});
    rep.table.rows.push_back({"bound_wve", b.bound_wve});
    rep.table.rows.push_back({"density_floor_holds", b.density_floor_holds});
    rep.table.rows.push_back({"bound_density_floor", b.bound_density_floor ? Cell{*b.bound_density_floor} : Cell{}});
  }
  rep.erratum_notes.push_back(
      "coherent-uspace: the printed u-space line uses the component phi and psi; wve_system_printed keeps it, wve_system is the true WVE");
  return rep;
}

Report run_phr(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  const Distribution base = parse_distribution(o.str("baseline"));
  if (o.has("a") && o.has("series-n")) usage("--a and --series-n are mutually exclusive");
  const double a = o.has("series-n") ? static_cast<double>(o.count("series-n", 1)) : o.real("a", 1.0);
  const PHRModel m{base, a};
  m.validate();
  const Distribution law = m.law();
  Report rep;
  rep.table.columns = {"t", "a", "wrse", "wrve", "wrve_direct", "closed_form"};
  for (double t : parse_grid(o.str("t"))) {
    Cell closed;
    if (base.family() == Family::Exponential) closed = series_exponential_wrve(a, base.param("lambda"), t);
    rep.table.rows.push_back({t, a, wrse_phr(m, t, q), wrve_phr(m, t, q), wrve({law, t}, q), closed});
  }
  rep.erratum_notes.push_back("phr-wrse-sign: the normalized y-integral of gamma is minus the WRSE; wrse is reported with the residual sign");
  return rep;
}

void study_rows(const EstimatorStudyReport& r, Report& rep) {
  rep.table.columns = {"t", "n", "bias", "mse", "true_value"};
  std::size_t failures = 0;
  for (const auto& row : r.rows) {
    rep.table.rows.push_back({row.t, static_cast<std::int64_t>(row.n), row.bias, row.mse, row.true_value});
    failures += row.failures;
  }
  if (failures > 0) {
    rep.erratum_notes.push_back(std::to_string(failures) + " estimates failed and were excluded from bias and mse");
  }
}

Report run_simulate(const RunConfig& cfg) {
  const Options o(cfg);
  StudyOptions so;
  so.threads = static_cast<unsigned>(o.count("threads", 0));
  so.reflect = o.flag("reflect");
  so.cfg = cfg.quadrature;
  const auto r = monte_carlo_study(parse_distribution(o.str("dist")), parse_grid(o.str("t")), parse_sizes(o.str("n")),
                                   o.count("reps", 500), BandwidthRule::parse(o.str("bandwidth", "silverman")),
                                   SampleSeed{cfg.seed}, so);
  Report rep;
  study_rows(r, rep);
  return rep;
}

Report run_estimate(const RunConfig& cfg) {
  const Options o(cfg);
  StudyOptions so;
  so.threads = static_cast<unsigned>(o.count("threads", 0));
  so.reflect = o.flag("reflect");
  so.cfg = cfg.quadrature;
  const Dataset data = load_dataset(o.str("data"));
  const auto r = bootstrap_study(data.values, parse_distribution(o.str("fitted")), parse_grid(o.str("t")),
                                 o.real("bn"), o.count("bootstrap", 600), SampleSeed{cfg.seed}, so);
  Report rep;
  study_rows(r, rep);
  return rep;
}

std::vector<double> lattice(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

Report run_curves(const RunConfig& cfg) {
  const Options o(cfg);
  const auto& q = cfg.quadrature;
  Report rep;
  rep.table.columns = {"series", "t", "wrve", "rve"};
  auto curve = [&](const Distribution& d, const std::vector<double>& ts, const std::string& label) {
    for (double t : ts) rep.table.rows.push_back({label, t, wrve({d, t}, q), rve(d, t, q)});
  };
  if (!o.has("preset")) {
    const Distribution d = parse_distribution(o.str("dist"));
    curve(d, parse_grid(o.str("t")), d.spec());
    return rep;
  }
  if (o.has("dist")) usage("--preset and --dist are mutually exclusive");
  const std::string preset = o.str("preset");
  if (preset == "uniform" || preset == "uniform-tail") {
    const std::vector<double> bs = preset == "uniform" ? std::vector<double>{1, 2, 10} : std::vector<double>{2, 7, 20};
    for (double b : bs) {
      const Distribution d = Distribution::uniform(0.0, b);
      curve(d, lattice(0.0, 0.975 * b, 40), d.spec());
    }
    if (preset == "uniform-tail") curve(Distribution::uniform(0.0, 7.0), lattice(5.0, 6.95, 40), "unif:a=0,b=7 (t in (5,7))");
  } else if (preset == "exponential" || preset == "exponential-wide") {
    const std::vector<double> ls = preset == "exponential" ? std::vector<double>{1, 4, 7} : std::vector<double>{1, 5, 7, 12};
    for (double l : ls) {
      const Distribution d = Distribution::exponential(l);
      curve(d, lattice(0.0, 5.0, 51), d.spec());
    }
  } else if (preset == "power") {
    for (double k : {0.5, 2.0, 5.0}) {
      const Distribution d = Distribution::power(k, 1.0);
      curve(d, lattice(0.025, 0.975, 39), d.spec());
    }
  } else if (preset == "phr-exponential") {
    for (double l : {1.0, 3.0, 4.0, 7.0}) {
      for (double a : {1.0, 2.0, 3.0, 4.0}) {
        const PHRModel m{Distribution::exponential(l), a};
        const std::string label = "phr(a=" + format_number(a) + ")[exp:lambda=" + format_number(l) + "]";
        for (double t : lattice(0.0, 3.0, 31)) {
          rep.table.rows.push_back({label, t, wrve_phr(m, t, q), rve(m.law(), t, q)});
        }
      }
    }
  } else {
    usage("unknown preset '" + preset + "'");
  }
  return rep;
}

Report run_erratum(const RunConfig& cfg) {
  Report rep;
  rep.table.columns = {"id", "printed", "oracle", "abs_diff", "consistent", "description"};
  for (const auto& e : erratum_report(cfg.quadrature)) {
    rep.table.rows.push_back({e.id, e.printed, e.oracle, e.abs_diff, e.consistent, e.description});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Output.

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

json cell_json(const Cell& c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(format_number(v)); }
    json operator()(std::int64_t v) const { return v; }
    json operator()(const std::string& v) const { return v; }
    json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

json config_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["options"] = cfg.options;
  j["seed"] = cfg.seed;
  j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                     {"abs_tol", cfg.quadrature.abs_tol},
                     {"tail_mass", cfg.quadrature.tail_mass},
                     {"max_subdivisions", cfg.quadrature.max_subdivisions}};
  j["format"] = cfg.format == Format::Csv ? "csv" : "json";
  return j;
}

// ---------------------------------------------------------------------------
// Argument parsing.

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
    usage(origin + ": '" + text + "' is not an unsigned 64-bit seed");
  }
  return v;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::UsageError || code == ErrorCode::ParseError ? 2 : 1;
}

void write_error(std::ostream& err, const std::string& code, const std::string& message, int exit_code) {
  json j = {{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}};
  err << j.dump() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const RunConfig& cfg, const Report& rep, const std::string& out_path, std::ostream& out) {
  std::ostringstream buf;
  if (cfg.format == Format::Csv) {
    write_csv(rep.table, buf);
  } else {
    write_json(cfg, rep, buf);
  }
  if (out_path.empty()) {
    out << buf.str();
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::UsageError, "cannot write " + out_path);
  f << buf.str();
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  return subcommand == o.subcommand && options == o.options && seed == o.seed && format == o.format &&
         quadrature.rel_tol == o.quadrature.rel_tol && quadrature.abs_tol == o.quadrature.abs_tol &&
         quadrature.tail_mass == o.quadrature.tail_mass && quadrature.max_subdivisions == o.quadrature.max_subdivisions;
}

std::string to_json(const RunConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

RunConfig run_config_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunConfig cfg;
    cfg.subcommand = j.at("subcommand").get<std::string>();
    find_sub(cfg.subcommand);
    cfg.options = j.at("options").get<std::map<std::string, std::string>>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    const json& qj = j.at("quadrature");
    cfg.quadrature.rel_tol = qj.at("rel_tol").get<double>();
    cfg.quadrature.abs_tol = qj.at("abs_tol").get<double>();
    cfg.quadrature.tail_mass = qj.at("tail_mass").get<double>();
    cfg.quadrature.max_subdivisions = qj.at("max_subdivisions").get<int>();
    const std::string f = j.at("format").get<std::string>();
    if (f != "csv" && f != "json") throw Error(ErrorCode::ParseError, "format must be csv or json");
    cfg.format = f == "csv" ? Format::Csv : Format::Json;
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run config: ") + e.what());
  }
}

Report execute(const RunConfig& cfg) {
  cfg.quadrature.validate();
  static const std::map<std::string, std::function<Report(const RunConfig&)>> table = {
      {"measure", run_measure}, {"residual", run_residual}, {"transform", run_transform},
      {"system", run_system},   {"phr", run_phr},           {"simulate", run_simulate},
      {"estimate", run_estimate}, {"curves", run_curves},   {"erratum", run_erratum}};
  const auto it = table.find(cfg.subcommand);
  if (it == table.end()) usage("unknown subcommand '" + cfg.subcommand + "'");
  // Options a subcommand does not know are rejected so that a replayed
  // config cannot silently carry a typo.
  const Subcommand& sub = find_sub(cfg.subcommand);
  for (const auto& [name, value] : cfg.options) {
    bool known = false;
    for (const auto& spec : sub.options) known = known || spec.name == name;
    if (!known) usage("option --" + name + " is not valid for '" + cfg.subcommand + "'");
  }
  return it->second(cfg);
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(const RunConfig& cfg, const Report& report, std::ostream& out) {
  json rows = json::array();
  for (const auto& row : report.table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[report.table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  json j;
  j["config"] = config_json(cfg);
  j["rows"] = std::move(rows);
  j["erratum_notes"] = report.erratum_notes;
  out << j.dump(2) << '\n';
}

std::vector<double> parse_grid(const std::string& text) {
  auto bad = [&]() -> std::vector<double> { throw Error(ErrorCode::ParseError, "bad grid '" + text + "'"); };
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) return bad();
    const double a = Options::parse_real("t", parts[0]);
    const double b = Options::parse_real("t", parts[1]);
    const double h = Options::parse_real("t", parts[2]);
    if (!(h > 0.0) || !(b >= a)) return bad();
    const double steps = std::floor((b - a) / h + 1e-9);
    if (steps > 1e6) return bad();
    std::vector<double> out;
    for (int i = 0; i <= static_cast<int>(steps); ++i) out.push_back(a + i * h);
    return out;
  }
  return parse_list("t", text);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted varentropy and weighted residual varentropy toolkit", "wvarent"};
  app.require_subcommand(0, 1);
  std::string config_path;
  std::string top_out;
  app.add_option("--config", config_path, "replay a configuration saved with --save-config");
  app.add_option("--out", top_out, "output file (with --config)");

  struct Common {
    std::string out;
    std::string format;
    std::string seed;
    std::string save_config;
    double rel_tol = QuadratureConfig{}.rel_tol;
    double abs_tol = QuadratureConfig{}.abs_tol;
    double tail_mass = QuadratureConfig{}.tail_mass;
    int max_subdivisions = QuadratureConfig{}.max_subdivisions;
  };
  std::map<std::string, Common> common;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> apps;
  for (const auto& sub : catalogue()) {
    CLI::App* s = app.add_subcommand(sub.name, sub.help);
    apps[sub.name] = s;
    Common& c = common[sub.name];
    for (const auto& spec : sub.options) {
      if (spec.flag) {
        s->add_flag("--" + spec.name, flags[sub.name][spec.name], spec.help);
      } else {
        s->add_option("--" + spec.name, values[sub.name][spec.name], spec.help);
      }
    }
    s->add_option("--out", c.out, "write the report to a file instead of stdout");
    s->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--seed", c.seed, "64-bit seed (falls back to WVARENT_SEED, then 42)");
    s->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance");
    s->add_option("--abs-tol", c.abs_tol, "quadrature absolute tolerance");
    s->add_option("--tail-mass", c.tail_mass, "probability mass beyond the first tail cut");
    s->add_option("--max-subdivisions", c.max_subdivisions, "quadrature subdivision budget");
    s->add_option("--save-config", c.save_config, "write the resolved run configuration as JSON");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return 0;
    }
    write_error(err, "UsageError", e.what(), 2);
    return 2;
  }

  try {
    RunConfig cfg;
    std::string out_path;
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) usage("--config replays a saved run and takes no subcommand");
      cfg = run_config_from_json(read_file(config_path));
      out_path = top_out;
    } else {
      if (app.get_subcommands().empty()) usage("a subcommand is required (try --help)");
      if (!top_out.empty()) usage("--out goes after the subcommand");
      const std::string name = app.get_subcommands().front()->get_name();
      const Subcommand& sub = find_sub(name);
      CLI::App* s = apps[name];
      const Common& c = common[name];
      cfg.subcommand = name;
      for (const auto& spec : sub.options) {
        if (s->count("--" + spec.name) == 0) continue;
        cfg.options[spec.name] = spec.flag ? "true" : values[name][spec.name];
      }
      cfg.format = c.format.empty() ? sub.default_format : (c.format == "csv" ? Format::Csv : Format::Json);
      if (!c.seed.empty()) {
        cfg.seed = parse_seed(c.seed, "--seed");
      } else if (const char* env = std::getenv("WVARENT_SEED"); env != nullptr && *env != '\0') {
        cfg.seed = parse_seed(env, "WVARENT_SEED");
      }
      cfg.quadrature = {c.rel_tol, c.abs_tol, c.tail_mass, c.max_subdivisions};
      out_path = c.out;
      if (!c.save_config.empty()) {
        std::ofstream f(c.save_config);
        if (!f) usage("cannot write " + c.save_config);
        f << to_json(cfg);
      }
    }
    const Report rep = execute(cfg);
    emit(cfg, rep, out_path, out);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    write_error(err, std::string(to_string(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what(), 1);
    return 1;
  }
}

}  // namespace wvarent::cli
