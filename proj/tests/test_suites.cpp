#include "doctest.h"

#include "graphriesz/families.hpp"
#include "graphriesz/report.hpp"
#include "graphriesz/suites.hpp"

#include <limits>

using namespace graphriesz;
using nlohmann::json;

TEST_CASE("rounding to 15 significant digits") {
  const json j = round_json({{"a", 0.1 + 0.2}, {"b", {1.0 / 3.0, 7}}, {"c", std::numeric_limits<double>::infinity()},
                             {"d", -std::numeric_limits<double>::infinity()}, {"e", std::nan("")}, {"f", "text"}});
  CHECK(j["a"].get<double>() == 0.3);
  CHECK(j["b"][0].get<double>() == 0.333333333333333);
  CHECK(j["b"][1].is_number_integer());
  CHECK(j["c"] == "inf");
  CHECK(j["d"] == "-inf");
  CHECK(j["e"] == "nan");
  CHECK(j["f"] == "text");
}

TEST_CASE("status names") {
  for (Status s : {Status::Pass, Status::Fail, Status::Report}) CHECK(status_from_name(status_name(s)) == s);
  CHECK(std::string(status_name(Status::Report)) == "report");
  CHECK_THROWS(status_from_name("maybe"));
}

TEST_CASE("report round trip and CSV") {
  SuiteReport r;
  r.suite = "demo";
  r.seed = 3;
  r.version = "x";
  r.checks.push_back({"one", "plumbing", {{"p", 1.5}}, {{"err", 1e-13}}, Status::Pass, 1e-10});
  r.checks.push_back({"two", "a, b", json::object(), {{"ratio", 2.0}}, Status::Report, 0.0});
  const SuiteReport back = report_from_json(to_json(r));
  CHECK(back.suite == "demo");
  CHECK(back.seed == 3);
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[1].status == Status::Report);
  CHECK(to_json(back) == to_json(r));
  CHECK(r.passed());

  const std::string csv = to_csv({r});
  CHECK(csv.rfind("suite,seed,id,anchor,status,tol,params,values\n", 0) == 0);
  CHECK(csv.find("demo,3,one,plumbing,pass") != std::string::npos);
  // fields containing commas are quoted
  CHECK(csv.find("\"a, b\"") != std::string::npos);
  r.checks[0].status = Status::Fail;
  CHECK(r.failures() == 1);
}

TEST_CASE("calculus suite passes and is deterministic") {
  SuiteConfig cfg;
  const SuiteReport a = run_suite("calculus", cfg);
  CHECK(a.passed());
  CHECK(a.suite == "calculus");
  CHECK(a.seed == 7);
  CHECK_FALSE(a.checks.empty());
  const SuiteReport b = run_suite("calculus", cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());
  for (const auto& c : a.checks) CHECK_FALSE(c.anchor.empty());
}

TEST_CASE("suite configuration overrides") {
  SuiteConfig cfg;
  cfg.graph = cycle_graph(8);
  cfg.p = 1.5;
  const SuiteReport r = run_suite("calculus", cfg);
  CHECK(r.passed());
  int swept = 0;
  for (const auto& c : r.checks)
    if (c.id == "gamma_sandwich" || c.id == "pseudo_gradient_bounds" || c.id == "operator_bounds") {
      CHECK(c.params["p"].get<double>() == 1.5);
      ++swept;
    }
  CHECK(swept == 3);
}

TEST_CASE("member errors become failed records") {
  SuiteConfig cfg;
  cfg.p = 0.5;  // outside every admissible range
  const SuiteReport r = run_suite("calculus", cfg);
  CHECK_FALSE(r.passed());
  bool saw_error = false;
  for (const auto& c : r.checks)
    if (c.status == Status::Fail && c.values.contains("error")) saw_error = true;
  CHECK(saw_error);
}

TEST_CASE("unknown suite") {
  CHECK_THROWS(run_suite("nope", SuiteConfig{}));
  CHECK(suite_names().size() == 8);
}
