#include "graphriesz/report.hpp"

#include "graphriesz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace graphriesz {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Report: return "report";
  }
  return "report";
}

Status status_from_name(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "report") return Status::Report;
  throw std::invalid_argument("unknown check status '" + s + "'");
}

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::Fail; }));
}

nlohmann::json round_json(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round_significant(v, 15);
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : j) out.push_back(round_json(e));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_json(it.value());
    return out;
  }
  return j;
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"anchor", c.anchor},
                      {"params", round_json(c.params)},
                      {"values", round_json(c.values)},
                      {"status", status_name(c.status)},
                      {"tol", round_json(c.tol)}});
  }
  return {{"suite", r.suite}, {"seed", r.seed}, {"version", r.version}, {"checks", checks}};
}

SuiteReport report_from_json(const nlohmann::json& j) {
  SuiteReport r;
  r.suite = j.at("suite").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.version = j.value("version", "");
  for (const auto& c : j.at("checks")) {
    Check k;
    k.id = c.at("id").get<std::string>();
    k.anchor = c.at("anchor").get<std::string>();
    k.params = c.value("params", nlohmann::json::object());
    k.values = c.value("values", nlohmann::json::object());
    k.status = status_from_name(c.at("status").get<std::string>());
    const auto& tol = c.at("tol");
    k.tol = tol.is_number() ? tol.get<double>() : 0.0;
    r.checks.push_back(std::move(k));
  }
  return r;
}

namespace {

std::string flatten(const nlohmann::json& obj) {
  std::string out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!out.empty()) out += ';';
    out += it.key();
    out += '=';
    out += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string to_csv(const std::vector<SuiteReport>& reports) {
  std::ostringstream os;
  os << "suite,seed,id,anchor,status,tol,params,values\n";
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      os << csv_field(r.suite) << ',' << r.seed << ',' << csv_field(c.id) << ',' << csv_field(c.anchor) << ','
         << status_name(c.status) << ',' << round_json(c.tol).dump() << ',' << csv_field(flatten(round_json(c.params)))
         << ',' << csv_field(flatten(round_json(c.values))) << '\n';
    }
  }
  return os.str();
}

}  // namespace graphriesz
