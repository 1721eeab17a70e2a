#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphriesz {

using Index = Eigen::Index;

/// Thrown for any structural defect in a graph: bad weights, loops,
/// duplicates, disconnectedness, empty interior.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected weighted edge between vertex positions u < v.
struct Edge {
  Index u = 0;
  Index v = 0;
  double mu = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Index vertex;
  double mu;
  Index edge;
};

/// Finite connected weighted graph G = (V, E, nu, mu) with an optional
/// Dirichlet set. Functions on the graph ("vertex functions") are indexed by
/// the interior vertices in vertex order and vanish on the boundary.
///
/// Immutable after construction. Edges are canonicalized: endpoints ordered
/// by vertex position, list sorted lexicographically.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<std::string> ids, Eigen::VectorXd nu,
                std::vector<Edge> edges, std::vector<Index> boundary = {});

  Index num_vertices() const { return static_cast<Index>(ids_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_interior() const { return static_cast<Index>(interior_.size()); }
  bool has_boundary() const { return num_interior() < num_vertices(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index v) const { return ids_[static_cast<std::size_t>(v)]; }
  std::optional<Index> find(const std::string& id) const;

  /// Measure on all vertices.
  const Eigen::VectorXd& nu() const { return nu_; }
  /// Measure restricted to the interior, in interior order.
  const Eigen::VectorXd& nu_interior() const { return nu_interior_; }
  /// deg_x = sum_y mu_xy over all vertices.
  const Eigen::VectorXd& degree() const { return degree_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Eigen::VectorXd edge_weights() const;

  std::span<const Neighbor> neighbors(Index v) const;

  bool is_boundary(Index v) const { return interior_pos_[static_cast<std::size_t>(v)] < 0; }
  std::vector<Index> boundary() const;
  /// Interior position of vertex v, or -1 for boundary vertices.
  Index interior_position(Index v) const { return interior_pos_[static_cast<std::size_t>(v)]; }
  Index interior_vertex(Index i) const { return interior_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& interior() const { return interior_; }

  /// Zero-extends an interior function to all vertices.
  Eigen::VectorXd extend(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  /// Restricts a function on all vertices to the interior.
  Eigen::VectorXd restrict(const Eigen::Ref<const Eigen::VectorXd>& full) const;

  /// Same graph with an additional Dirichlet set.
  WeightedGraph with_boundary(std::vector<Index> boundary) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
  Eigen::VectorXd nu_;
  Eigen::VectorXd nu_interior_;
  Eigen::VectorXd degree_;
  std::vector<Edge> edges_;
  std::vector<Index> adjacency_offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<Index> interior_;
  std::vector<Index> interior_pos_;
};

/// sup_x deg_x / nu_x, the bounded-Laplacian constant M.
double bl_constant(const WeightedGraph& g);

}  // namespace graphriesz
