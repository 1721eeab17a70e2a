#pragma once

#include "graphriesz/extremal.hpp"
#include "graphriesz/graph.hpp"
#include "graphriesz/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphriesz {

struct SuiteConfig {
  std::uint64_t seed = 7;
  std::optional<double> p;  ///< replaces the suite's exponent sweep
  std::optional<double> a;  ///< replaces the suite's tilt sweep
  double t = 1.0;
  double tol = 1e-10;       ///< identity tolerance
  Budget budget{8};
  std::optional<WeightedGraph> graph;  ///< replaces the suite's graph family
};

const std::vector<std::string>& suite_names();

/// Runs one suite ("all" runs every suite in order, check ids prefixed by the
/// suite name). Member errors become failed records.
SuiteReport run_suite(const std::string& id, const SuiteConfig& config);

}  // namespace graphriesz
