#include "wvarent/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "wvarent/error.hpp"

namespace wvarent {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == ',')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const Dataset& nano_droplet_dataset() {
  static const Dataset d{
      "nano",
      {0.2289300, 0.5810291, 0.6935846, 0.7221355, 0.7357869, 0.7389012, 0.7486177, 0.7491848,
       0.7688918, 0.7689745, 0.7857656, 0.7882443, 0.7962973, 0.7972708, 0.8094872, 0.8342509,
       0.8451560, 0.8527647, 0.8744825, 0.8832821, 0.8905104, 0.8928568, 0.9603346, 0.9624409,
       0.9677539, 0.9792698, 0.9926678, 1.0297182, 1.0890227, 1.0972401, 1.1235326, 1.1559192,
       1.1755080, 1.1764967, 1.1836366, 1.1975052, 1.2171928, 1.2456470, 1.2475189, 1.3245510,
       1.3485822, 1.3796668, 1.3932774, 1.4432065, 1.4697339, 1.4974976, 1.5356593, 1.5375506,
       1.5426158, 1.5430411, 1.5679230, 1.6287098, 1.6744305, 1.6838840, 1.7235515, 1.7685406,
       1.7980336, 1.8073133},
      "nano droplet dispersion on a flat plate, molecular dynamics simulation (58 observations)"};
  return d;
}

const Dataset& covid_france_dataset() {
  static const Dataset d{
      "covid",
      {0.0740, 0.1190, 0.1344, 0.1926, 0.2232, 0.3140, 0.3243, 0.3393, 0.3563, 0.3706, 0.3843, 0.4164,
       0.4482, 0.4578, 0.4616, 0.4755, 0.4917, 0.5045, 0.5069, 0.5325, 0.5625, 0.5972, 0.8057, 0.8078},
      "Covid-19 daily death rate, France, 1-24 October 2021 (24 observations)"};
  return d;
}

Dataset load_dataset(const std::string& source) {
  if (source == "builtin:nano") return nano_droplet_dataset();
  if (source == "builtin:covid") return covid_france_dataset();
  if (source.rfind("builtin:", 0) == 0) {
    throw Error(ErrorCode::ParseError, "unknown builtin dataset '" + source + "'");
  }
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open dataset " + source);
  Dataset d{source, {}, "file " + source};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    const bool numeric = r.ptr == s.data() + s.size() &&
                         (r.ec == std::errc() || r.ec == std::errc::result_out_of_range);
    if (!numeric) {
      if (d.values.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw Error(ErrorCode::ParseError, source + ", line " + std::to_string(line_no) + ": not a number");
    }
    if (!std::isfinite(v) || r.ec != std::errc() || v < 0.0) {
      throw Error(ErrorCode::ValidationError,
                  source + ", line " + std::to_string(line_no) + ": values must be finite and nonnegative");
    }
    d.values.push_back(v);
  }
  if (d.values.empty()) throw Error(ErrorCode::ParseError, source + ": no data values");
  return d;
}

}  // namespace wvarent
