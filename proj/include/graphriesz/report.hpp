#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphriesz {

/// pass/fail for statements with proven constants, report for measured
/// constants that are only measured, not bounded.
enum class Status { Pass, Fail, Report };

const char* status_name(Status s);
Status status_from_name(const std::string& s);

struct Check {
  std::string id;
  std::string anchor;  ///< statement the check exercises, or "plumbing"
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json values = nlohmann::json::object();
  Status status = Status::Report;
  double tol = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<Check> checks;

  int failures() const;
  bool passed() const { return failures() == 0; }
};

/// Rounds every floating-point number to 15 significant digits; non-finite
/// values become the strings "inf", "-inf", "nan".
nlohmann::json round_json(const nlohmann::json& j);

nlohmann::json to_json(const SuiteReport& r);
SuiteReport report_from_json(const nlohmann::json& j);

/// One row per check: suite,seed,id,anchor,status,tol,params,values with
/// params/values flattened to key=value pairs joined by ';'.
std::string to_csv(const std::vector<SuiteReport>& reports);

}  // namespace graphriesz
