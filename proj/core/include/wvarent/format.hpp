#pragma once

#include <string>

namespace wvarent {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

}  // namespace wvarent
