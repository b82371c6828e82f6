#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wvarent/quadrature.hpp"

namespace wvarent::cli {

enum class Format { Csv, Json };

/// Everything needed to replay one invocation.
struct RunConfig {
  std::string subcommand;
  /// Option name (without dashes) to its textual value; flags hold "true".
  std::map<std::string, std::string> options;
  std::uint64_t seed = 42;
  QuadratureConfig quadrature{};
  Format format = Format::Csv;

  bool operator==(const RunConfig& other) const;
};

std::string to_json(const RunConfig& cfg);
/// ParseError on malformed or incomplete JSON.
RunConfig run_config_from_json(const std::string& text);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  Table table;
  std::vector<std::string> erratum_notes;
};

/// Runs a parsed configuration. Library errors propagate as wvarent::Error.
Report execute(const RunConfig& cfg);

void write_csv(const Table& table, std::ostream& out);
void write_json(const RunConfig& cfg, const Report& report, std::ostream& out);

/// Grid syntax: a scalar, a comma list, or start:stop:step (stop included
/// when it lies on the lattice). ParseError otherwise.
std::vector<double> parse_grid(const std::string& text);

/// Entry point. args excludes the program name. Returns the exit status:
/// 0 success, 1 computation error, 2 usage error. Errors are written to err
/// as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wvarent::cli
