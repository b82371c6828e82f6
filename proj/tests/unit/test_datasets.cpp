#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "wvarent/datasets.hpp"
#include "wvarent/error.hpp"

using namespace wvarent;

namespace {
ErrorCode load_code(const std::string& body) {
  const std::string path = "dataset_test.txt";
  {
    std::ofstream f(path);
    f << body;
  }
  try {
    load_dataset(path);
  } catch (const Error& e) {
    std::remove(path.c_str());
    return e.code();
  }
  std::remove(path.c_str());
  return ErrorCode::UsageError;
}
}  // namespace

TEST_CASE("builtin data sets") {
  const auto nano = load_dataset("builtin:nano");
  REQUIRE(nano.values.size() == 58);
  CHECK(nano.values[0] == doctest::Approx(0.2289300));
  const auto covid = load_dataset("builtin:covid");
  REQUIRE(covid.values.size() == 24);
  CHECK(covid.values[0] == doctest::Approx(0.0740));
  CHECK_THROWS_AS(load_dataset("builtin:iris"), Error);
}

TEST_CASE("data files") {
  const std::string path = "dataset_ok.txt";
  {
    std::ofstream f(path);
    f << "# comment\nvalue\n0.5\n1.5  # trailing note\n\n2.5\n3\n";
  }
  CHECK(load_dataset(path).values == std::vector<double>{0.5, 1.5, 2.5, 3});
  std::remove(path.c_str());
  CHECK(load_code("") == ErrorCode::ParseError);
  CHECK(load_code("0.5\nabc\n") == ErrorCode::ParseError);
  CHECK(load_code("0.5\n1.5, 2.5\n") == ErrorCode::ParseError);
  CHECK(load_code("0.5\n-1\n") == ErrorCode::ValidationError);
  CHECK(load_code("0.5\ninf\n") == ErrorCode::ValidationError);
}
