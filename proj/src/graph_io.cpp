#include "graphriesz/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace graphriesz {
namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw GraphError(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

double number(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw GraphError(where + ": field \"" + key + "\" is not a number");
  return v.get<double>();
}

std::string string_field(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw GraphError(where + ": field \"" + key + "\" is not a string");
  return v.get<std::string>();
}

}  // namespace

WeightedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw GraphError("graph: top level is not an object");
  const auto& vs = require(j, "vertices", "graph");
  const auto& es = require(j, "edges", "graph");
  if (!vs.is_array()) throw GraphError("graph: \"vertices\" is not an array");
  if (!es.is_array()) throw GraphError("graph: \"edges\" is not an array");

  std::vector<std::string> ids;
  Eigen::VectorXd nu(static_cast<Index>(vs.size()));
  std::unordered_map<std::string, Index> index;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const std::string where = "vertices[" + std::to_string(k) + "]";
    ids.push_back(string_field(vs[k], "id", where));
    nu[static_cast<Index>(k)] = number(vs[k], "nu", where);
    if (!(nu[static_cast<Index>(k)] > 0.0))
      throw GraphError(where + ": nonpositive vertex measure at '" + ids.back() + "'");
    index.emplace(ids.back(), static_cast<Index>(k));
  }

  auto lookup = [&](const std::string& name, const std::string& where) {
    auto it = index.find(name);
    if (it == index.end()) throw GraphError(where + ": unknown vertex '" + name + "'");
    return it->second;
  };

  std::vector<Edge> edges;
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const auto u = string_field(es[k], "u", where);
    const auto v = string_field(es[k], "v", where);
    const double mu = number(es[k], "mu", where);
    if (!(mu > 0.0)) throw GraphError(where + ": nonpositive edge weight on {" + u + "," + v + "}");
    edges.push_back({lookup(u, where), lookup(v, where), mu});
  }

  std::vector<Index> boundary;
  if (j.contains("boundary")) {
    const auto& bs = j.at("boundary");
    if (!bs.is_array()) throw GraphError("graph: \"boundary\" is not an array");
    for (std::size_t k = 0; k < bs.size(); ++k) {
      const std::string where = "boundary[" + std::to_string(k) + "]";
      if (!bs[k].is_string()) throw GraphError(where + ": not a string");
      boundary.push_back(lookup(bs[k].get<std::string>(), where));
    }
  }
  return WeightedGraph(std::move(ids), std::move(nu), std::move(edges), std::move(boundary));
}

WeightedGraph parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("graph: malformed JSON: ") + e.what());
  }
  return graph_from_json(j);
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (Index v = 0; v < g.num_vertices(); ++v) j["vertices"].push_back({{"id", g.id(v)}, {"nu", g.nu()[v]}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({{"u", g.id(e.u)}, {"v", g.id(e.v)}, {"mu", e.mu}});
  j["boundary"] = nlohmann::json::array();
  for (Index b : g.boundary()) j["boundary"].push_back(g.id(b));
  return j;
}

std::string serialize_graph(const WeightedGraph& g) { return graph_to_json(g).dump(); }

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
  out << graph_to_json(g).dump(2) << '\n';
}

nlohmann::json function_to_json(const Eigen::Ref<const Eigen::VectorXd>& f) {
  return std::vector<double>(f.data(), f.data() + f.size());
}

Eigen::VectorXd function_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("function JSON must be an array");
  Eigen::VectorXd f(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw std::invalid_argument("function JSON entries must be numbers");
    f[static_cast<Index>(k)] = j[k].get<double>();
  }
  return f;
}

}  // namespace graphriesz
