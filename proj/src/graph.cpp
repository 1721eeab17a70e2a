#include "graphriesz/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace graphriesz {

WeightedGraph::WeightedGraph(std::vector<std::string> ids, Eigen::VectorXd nu,
                             std::vector<Edge> edges, std::vector<Index> boundary)
    : ids_(std::move(ids)), nu_(std::move(nu)), edges_(std::move(edges)) {
  const Index n = num_vertices();
  if (n == 0) throw GraphError("graph has no vertices");
  if (nu_.size() != n) throw GraphError("measure length does not match vertex count");

  for (Index v = 0; v < n; ++v) {
    if (!index_.emplace(ids_[static_cast<std::size_t>(v)], v).second)
      throw GraphError("duplicate vertex id '" + id(v) + "'");
    if (!(nu_[v] > 0.0) || !std::isfinite(nu_[v]))
      throw GraphError("nonpositive vertex measure at '" + id(v) + "'");
  }

  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
    if (e.u == e.v) throw GraphError("self-loop at '" + id(e.u) + "'");
    if (!(e.mu > 0.0) || !std::isfinite(e.mu))
      throw GraphError("nonpositive edge weight on {" + id(e.u) + "," + id(e.v) + "}");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v)
      throw GraphError("duplicate edge {" + id(edges_[k].u) + "," + id(edges_[k].v) + "}");
  }

  // CSR adjacency
  std::vector<Index> count(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : edges_) {
    ++count[static_cast<std::size_t>(e.u) + 1];
    ++count[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t k = 1; k < count.size(); ++k) count[k] += count[k - 1];
  adjacency_offsets_ = count;
  adjacency_.resize(static_cast<std::size_t>(count.back()));
  std::vector<Index> fill(count.begin(), count.end() - 1);
  degree_ = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < num_edges(); ++k) {
    const auto& e = edges_[static_cast<std::size_t>(k)];
    adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = {e.v, e.mu, k};
    adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++)] = {e.u, e.mu, k};
    degree_[e.u] += e.mu;
    degree_[e.v] += e.mu;
  }

  // connectivity of the full graph
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{0};
  visited[0] = 1;
  Index reached = 1;
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (const auto& nb : neighbors(v)) {
      if (!visited[static_cast<std::size_t>(nb.vertex)]) {
        visited[static_cast<std::size_t>(nb.vertex)] = 1;
        ++reached;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (reached != n) {
    Index missing = 0;
    while (visited[static_cast<std::size_t>(missing)]) ++missing;
    throw GraphError("graph not connected (vertex '" + id(missing) + "' unreachable)");
  }

  interior_pos_.assign(static_cast<std::size_t>(n), 0);
  for (Index b : boundary) {
    if (b < 0 || b >= n) throw GraphError("boundary vertex out of range");
    interior_pos_[static_cast<std::size_t>(b)] = -1;
  }
  for (Index v = 0; v < n; ++v) {
    if (interior_pos_[static_cast<std::size_t>(v)] == 0) {
      interior_pos_[static_cast<std::size_t>(v)] = static_cast<Index>(interior_.size());
      interior_.push_back(v);
    }
  }
  if (interior_.empty()) throw GraphError("empty interior: every vertex is on the boundary");
  nu_interior_.resize(num_interior());
  for (Index i = 0; i < num_interior(); ++i) nu_interior_[i] = nu_[interior_vertex(i)];
}

std::optional<Index> WeightedGraph::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::VectorXd WeightedGraph::edge_weights() const {
  Eigen::VectorXd w(num_edges());
  for (Index k = 0; k < num_edges(); ++k) w[k] = edges_[static_cast<std::size_t>(k)].mu;
  return w;
}

std::span<const Neighbor> WeightedGraph::neighbors(Index v) const {
  const auto b = static_cast<std::size_t>(adjacency_offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(adjacency_offsets_[static_cast<std::size_t>(v) + 1]);
  return {adjacency_.data() + b, e - b};
}

std::vector<Index> WeightedGraph::boundary() const {
  std::vector<Index> out;
  for (Index v = 0; v < num_vertices(); ++v)
    if (is_boundary(v)) out.push_back(v);
  return out;
}

Eigen::VectorXd WeightedGraph::extend(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != num_interior()) throw std::invalid_argument("vertex function length mismatch");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(num_vertices());
  for (Index i = 0; i < num_interior(); ++i) full[interior_vertex(i)] = f[i];
  return full;
}

Eigen::VectorXd WeightedGraph::restrict(const Eigen::Ref<const Eigen::VectorXd>& full) const {
  if (full.size() != num_vertices()) throw std::invalid_argument("full vertex function length mismatch");
  Eigen::VectorXd f(num_interior());
  for (Index i = 0; i < num_interior(); ++i) f[i] = full[interior_vertex(i)];
  return f;
}

WeightedGraph WeightedGraph::with_boundary(std::vector<Index> extra) const {
  std::set<Index> all(extra.begin(), extra.end());
  for (Index b : boundary()) all.insert(b);
  return WeightedGraph(ids_, nu_, edges_, std::vector<Index>(all.begin(), all.end()));
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  return a.ids_ == b.ids_ && a.nu_ == b.nu_ && a.edges_ == b.edges_ && a.interior_ == b.interior_;
}

double bl_constant(const WeightedGraph& g) {
  return (g.degree().array() / g.nu().array()).maxCoeff();
}

}  // namespace graphriesz
