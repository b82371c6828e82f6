#pragma once

#include <string>
#include <vector>

namespace wvarent {

struct Dataset {
  std::string name;
  std::vector<double> values;
  std::string provenance;
};

/// Nano droplet dispersion on a flat plate (58 molecular-dynamics values).
const Dataset& nano_droplet_dataset();
/// Daily Covid-19 death rate in France, 1-24 October 2021 (24 values).
const Dataset& covid_france_dataset();

/// builtin:nano, builtin:covid or a file path holding one number per line (a
/// single CSV column; one non-numeric header line, blank lines and '#'
/// comments are skipped). ParseError names the offending line;
/// ValidationError flags negative or non-finite values.
Dataset load_dataset(const std::string& source);

}  // namespace wvarent
