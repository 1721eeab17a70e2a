#pragma once

#include "graphriesz/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphriesz {

enum class Measure { Unit, Degree };

/// Parameters for the canonical graph families. Only the fields relevant to
/// `name` are read.
struct FamilySpec {
  std::string name;           ///< path | cycle | complete | eps_lattice | expanding_tree | regular_tree | random
  Index n = 2;                ///< size (path/cycle/complete/random); probe index for expanding_tree
  Index K = 5;                ///< eps_lattice half-width
  double eps = 1.0;           ///< eps_lattice defect weight
  Index depth = 3;            ///< tree depth
  Index branching = 2;        ///< regular_tree branching
  double m_target = 1.0;      ///< random: bound on deg/nu
  Index boundary_count = 0;   ///< random: number of Dirichlet vertices
  std::uint64_t seed = 0;
  Measure measure = Measure::Unit;
};

WeightedGraph path_graph(Index n, Measure measure = Measure::Unit);
WeightedGraph cycle_graph(Index n, Measure measure = Measure::Unit);
WeightedGraph complete_graph(Index n, Measure measure = Measure::Unit);

/// Integer lattice on {-K, ..., K+1} with mu_{0,1} = eps and all other
/// consecutive weights 1. The measure is the degree of the infinite lattice
/// (2 everywhere, 1+eps at 0 and 1), so truncation does not perturb it.
WeightedGraph eps_lattice(Index K, double eps);

/// Successor count d_i of layer i in the expanding tree:
/// d_i = 1 for i <= 3, d_{2m} = 1 and d_{2m+1} = 2m+1 for m >= 2.
Index expanding_tree_successors(Index layer);

/// Spine truncation of the expanding tree: the first-child path from the
/// root down to `depth`, with every spine vertex above `depth` carrying all of
/// its successors. mu = 1 and nu is the degree in the infinite tree, so nu
/// coincides with the stored degree on every spine vertex above `depth`.
/// Requires n >= 3 and depth >= 2n + 2 so that the probe vertex at layer 2n
/// and its neighbors are exact.
WeightedGraph expanding_tree(Index n, Index depth);
std::string expanding_tree_spine_id(Index layer);

/// Full `branching`-ary tree of the given depth, mu = 1, nu = degree in the
/// infinite tree, leaves (layer == depth) marked Dirichlet.
WeightedGraph regular_tree(Index branching, Index depth);

/// Connected random graph with max deg/nu equal to m_target; `boundary_count`
/// vertices chosen at random as Dirichlet set. Deterministic in seed.
WeightedGraph random_graph(Index n, double m_target, std::uint64_t seed, Index boundary_count = 0);

WeightedGraph dirichlet(const WeightedGraph& g, const std::vector<std::string>& boundary_ids);

WeightedGraph generate_family(const FamilySpec& spec);

}  // namespace graphriesz
