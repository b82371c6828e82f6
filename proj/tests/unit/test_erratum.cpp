#include <cmath>
#include <set>

#include "doctest.h"
#include "wvarent/erratum.hpp"

using namespace wvarent;

TEST_CASE("erratum report lists every checked expression once") {
  const auto entries = erratum_report();
  std::set<std::string> ids;
  for (const auto& e : entries) {
    CHECK(ids.insert(e.id).second);
    CHECK_FALSE(e.description.empty());
    if (std::isfinite(e.oracle) && std::isfinite(e.printed)) {
      CHECK(e.abs_diff == doctest::Approx(std::abs(e.printed - e.oracle)));
      CHECK(e.consistent == (e.abs_diff <= e.tolerance));
    }
  }
  for (const char* id : {"power-wve", "power-wrve", "location-shift", "monotone-decreasing", "wrve-derivative",
                         "affine-residual", "coherent-uspace", "parallel2-power"}) {
    CAPTURE(id);
    CHECK(ids.count(id) == 1);
  }
  for (const auto& e : entries) {
    if (e.id == "discrete-ve" || e.id == "phr-series-exponential") CHECK(e.consistent);
    if (e.id == "power-wve" || e.id == "location-shift" || e.id == "pareto-shift") CHECK_FALSE(e.consistent);
  }
}
