#include "graphriesz/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace graphriesz {
namespace {

Eigen::VectorXd degrees_of(Index n, const std::vector<Edge>& edges) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (const auto& e : edges) {
    d[e.u] += e.mu;
    d[e.v] += e.mu;
  }
  return d;
}

WeightedGraph with_measure(std::vector<std::string> ids, std::vector<Edge> edges, Measure m) {
  const auto n = static_cast<Index>(ids.size());
  Eigen::VectorXd nu = m == Measure::Unit ? Eigen::VectorXd::Ones(n) : degrees_of(n, edges);
  return WeightedGraph(std::move(ids), std::move(nu), std::move(edges));
}

std::vector<std::string> numbered(Index n, const std::string& prefix = "v") {
  std::vector<std::string> ids;
  for (Index i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

}  // namespace

WeightedGraph path_graph(Index n, Measure measure) {
  if (n < 1) throw GraphError("path needs at least one vertex");
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  if (n == 1) return WeightedGraph({"v0"}, Eigen::VectorXd::Ones(1), {});
  return with_measure(numbered(n), std::move(edges), measure);
}

WeightedGraph cycle_graph(Index n, Measure measure) {
  if (n < 3) throw GraphError("cycle needs at least three vertices");
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return with_measure(numbered(n), std::move(edges), measure);
}

WeightedGraph complete_graph(Index n, Measure measure) {
  if (n < 1) throw GraphError("complete graph needs at least one vertex");
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  if (n == 1) return WeightedGraph({"v0"}, Eigen::VectorXd::Ones(1), {});
  return with_measure(numbered(n), std::move(edges), measure);
}

WeightedGraph eps_lattice(Index K, double eps) {
  if (K < 1) throw GraphError("eps_lattice needs K >= 1");
  if (!(eps > 0.0)) throw GraphError("nonpositive edge weight eps");
  std::vector<std::string> ids;
  const Index n = 2 * K + 2;
  Eigen::VectorXd nu(n);
  std::vector<Edge> edges;
  for (Index k = 0; k < n; ++k) {
    const Index site = k - K;
    ids.push_back(std::to_string(site));
    nu[k] = (site == 0 || site == 1) ? 1.0 + eps : 2.0;
    if (k + 1 < n) edges.push_back({k, k + 1, site == 0 ? eps : 1.0});
  }
  return WeightedGraph(std::move(ids), std::move(nu), std::move(edges));
}

Index expanding_tree_successors(Index layer) {
  if (layer <= 3) return 1;
  if (layer % 2 == 0) return 1;
  return layer;
}

std::string expanding_tree_spine_id(Index layer) { return "s" + std::to_string(layer); }

WeightedGraph expanding_tree(Index n, Index depth) {
  if (n < 3) throw GraphError("expanding_tree needs n >= 3");
  if (depth < 2 * n + 2) throw GraphError("expanding_tree needs depth >= 2n+2 for an exact probe");
  std::vector<std::string> ids;
  std::vector<double> nu;
  std::vector<Edge> edges;
  auto infinite_degree = [](Index layer) {
    return static_cast<double>(expanding_tree_successors(layer) + (layer > 0 ? 1 : 0));
  };
  for (Index layer = 0; layer <= depth; ++layer) {
    ids.push_back(expanding_tree_spine_id(layer));
    nu.push_back(infinite_degree(layer));
  }
  for (Index layer = 0; layer < depth; ++layer) {
    edges.push_back({layer, layer + 1, 1.0});
    const Index d = expanding_tree_successors(layer);
    for (Index c = 1; c < d; ++c) {
      ids.push_back(expanding_tree_spine_id(layer) + "c" + std::to_string(c));
      nu.push_back(infinite_degree(layer + 1));
      edges.push_back({layer, static_cast<Index>(ids.size()) - 1, 1.0});
    }
  }
  return WeightedGraph(std::move(ids), Eigen::Map<Eigen::VectorXd>(nu.data(), static_cast<Index>(nu.size())),
                       std::move(edges));
}

WeightedGraph regular_tree(Index branching, Index depth) {
  if (branching < 1 || depth < 1) throw GraphError("regular_tree needs branching >= 1 and depth >= 1");
  std::vector<std::string> ids{"t0"};
  std::vector<double> nu{static_cast<double>(branching)};
  std::vector<Edge> edges;
  std::vector<Index> boundary;
  std::vector<Index> layer{0};
  for (Index d = 1; d <= depth; ++d) {
    std::vector<Index> next;
    for (Index parent : layer) {
      for (Index c = 0; c < branching; ++c) {
        const auto v = static_cast<Index>(ids.size());
        ids.push_back("t" + std::to_string(v));
        nu.push_back(static_cast<double>(branching + 1));
        edges.push_back({parent, v, 1.0});
        next.push_back(v);
        if (d == depth) boundary.push_back(v);
      }
    }
    layer = std::move(next);
  }
  return WeightedGraph(std::move(ids), Eigen::Map<Eigen::VectorXd>(nu.data(), static_cast<Index>(nu.size())),
                       std::move(edges), std::move(boundary));
}

WeightedGraph random_graph(Index n, double m_target, std::uint64_t seed, Index boundary_count) {
  if (n < 2) throw GraphError("random graph needs n >= 2");
  if (!(m_target > 0.0)) throw GraphError("random graph needs M_target > 0");
  if (boundary_count < 0 || boundary_count >= n) throw GraphError("empty interior: boundary_count >= n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] { return std::exp(std::log(0.2) + unit(rng) * std::log(10.0)); };

  std::set<std::pair<Index, Index>> present;
  std::vector<Edge> edges;
  for (Index v = 1; v < n; ++v) {
    const auto u = static_cast<Index>(unit(rng) * static_cast<double>(v));
    edges.push_back({u, v, weight()});
    present.insert({u, v});
  }
  const double extra_prob = std::min(1.0, 2.5 / static_cast<double>(n));
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (present.count({u, v})) continue;
      if (unit(rng) < extra_prob) edges.push_back({u, v, weight()});
    }
  }
  const Eigen::VectorXd deg = degrees_of(n, edges);
  Eigen::VectorXd nu(n);
  for (Index v = 0; v < n; ++v) {
    const double slack = v == 0 ? 1.0 : 0.5 + 0.5 * unit(rng);
    nu[v] = deg[v] / (m_target * slack);
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> boundary(order.begin(), order.begin() + boundary_count);
  return WeightedGraph(numbered(n), std::move(nu), std::move(edges), std::move(boundary));
}

WeightedGraph dirichlet(const WeightedGraph& g, const std::vector<std::string>& boundary_ids) {
  std::vector<Index> b;
  for (const auto& name : boundary_ids) {
    auto v = g.find(name);
    if (!v) throw GraphError("unknown boundary vertex '" + name + "'");
    b.push_back(*v);
  }
  return g.with_boundary(std::move(b));
}

WeightedGraph generate_family(const FamilySpec& s) {
  if (s.name == "path") return path_graph(s.n, s.measure);
  if (s.name == "cycle") return cycle_graph(s.n, s.measure);
  if (s.name == "complete") return complete_graph(s.n, s.measure);
  if (s.name == "eps_lattice") return eps_lattice(s.K, s.eps);
  if (s.name == "expanding_tree") return expanding_tree(s.n, s.depth);
  if (s.name == "regular_tree") return regular_tree(s.branching, s.depth);
  if (s.name == "random") return random_graph(s.n, s.m_target, s.seed, s.boundary_count);
  throw GraphError("unknown graph family '" + s.name + "'");
}

}  // namespace graphriesz
