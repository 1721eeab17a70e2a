#pragma once

#include "graphriesz/graph.hpp"

#include "json.hpp"

#include <string>

namespace graphriesz {

/// Graph JSON:
///   {"vertices":[{"id":str,"nu":num}], "edges":[{"u":str,"v":str,"mu":num}], "boundary":[str]}
/// Throws GraphError naming the offending element.
WeightedGraph parse_graph(const std::string& text);
WeightedGraph graph_from_json(const nlohmann::json& j);
std::string serialize_graph(const WeightedGraph& g);
nlohmann::json graph_to_json(const WeightedGraph& g);

WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

/// Vertex and edge functions are plain arrays in canonical vertex/edge order.
nlohmann::json function_to_json(const Eigen::Ref<const Eigen::VectorXd>& f);
Eigen::VectorXd function_from_json(const nlohmann::json& j);

}  // namespace graphriesz
