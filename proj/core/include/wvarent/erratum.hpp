#pragma once

#include <string>
#include <vector>

#include "wvarent/quadrature.hpp"

namespace wvarent {

/// One printed expression evaluated next to an independent oracle.
struct ErratumEntry {
  std::string id;
  std::string description;
  double printed = 0.0;
  /// +inf when the oracle shows the quantity diverges.
  double oracle = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool consistent = false;
};

/// Evaluates every known printed-versus-oracle comparison. Deterministic.
std::vector<ErratumEntry> erratum_report(const QuadratureConfig& cfg = {});

}  // namespace wvarent
