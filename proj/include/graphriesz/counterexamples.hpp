#pragma once

#include "graphriesz/graph.hpp"
#include "graphriesz/spectral.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace graphriesz {

/// Tent f_k(i) = max(1 - i/k, 0) for i >= 1, 0 for i <= 0, on eps_lattice(K, .).
Eigen::VectorXd lattice_tent(const WeightedGraph& lattice, Index K, Index k);

struct LatticeRow {
  double eps = 0.0;
  double vertex_gradient_norm = 0.0;  ///< || |grad f_k| ||_{l^p(V, deg)}
  double edge_gradient_norm = 0.0;    ///< || |D f_k| ||_{l^p(E, mu)}
  double ratio = 0.0;
};

struct LatticeResult {
  double p = 0.0;
  Index K = 0;
  Index k = 0;
  std::vector<LatticeRow> rows;
  double slope = 0.0;         ///< least-squares slope of log ratio against log eps
  double expected = 0.0;      ///< 1/2 - 1/p
  double truncation_gap = 0.0;  ///< max relative change of the norms when K is doubled
};

/// Vertex-vs-edge gradient norms of the tent functions on the eps-lattice.
/// Requires p in (1, 2) and k <= K - 1 (support strictly inside the truncation).
LatticeResult counterexample_nonequiv(Index K, std::span<const double> eps, double p, Index k);

struct TreeRow {
  Index n = 0;
  double lhs = 0.0;
  double rhs_factor = 0.0;
  double char_ratio = 0.0;      ///< lhs / rhs_factor
  double mi_ratio = 0.0;        ///< ||grad delta||_p^2 / (||delta||_p ||Delta delta||_p)
  double mi_power_ratio = 0.0;  ///< (2^{p/2} ||grad delta||_p^p)^2 / (||delta||_p^p ||Delta delta||_p^p)
  bool cross_checked = false;
  double cross_check_error = 0.0;  ///< relative mismatch between char sides and direct norms
};

struct TreeResult {
  double p = 0.0;
  std::vector<TreeRow> rows;
  double lhs_exponent = 0.0;
  double char_ratio_exponent = 0.0;
  double mi_exponent = 0.0;
  double mi_power_exponent = 0.0;
  double expected = 0.0;  ///< 2 - p
  double max_rhs_factor = 0.0;
};

/// Dirac mass at the layer-2n spine vertex of expanding_tree(n, 2n + 2).
TreeResult counterexample_tree(std::span<const Index> ns, double p);

struct ChainRecord {
  bool degenerate = false;  ///< Delta f = 0 (f in the kernel)
  double t_star = 0.0;      ///< ||f||_p / ||Delta f||_p
  double C_G = 0.0;         ///< max over g in {f, Delta f} of sup_t t^{1/2} ||D e^{-t Delta} g|| / ||g||
  double T1 = 0.0;          ///< ||Df||
  double T2 = 0.0;          ///< ||D e^{-t Delta} f|| + int_0^t ||D e^{-s Delta} Delta f|| ds
  double T3 = 0.0;          ///< C_G t^{-1/2} ||f|| + 2 C_G t^{1/2} ||Delta f||
  double mi_ratio = 0.0;    ///< ||Df||^2 / (||f|| ||Delta f||)
  double composed = 0.0;    ///< 9 C_G^2, the MI constant produced by the chain
  bool chain_holds = false;
  // semigroup-to-gradient direction, sup over a t grid
  double g_sup = 0.0;         ///< sup_t t ||D u_t||^2 / ||f||^2
  double mi_sup = 0.0;        ///< sup_t MI ratio of u_t
  double contraction_sup = 0.0;  ///< sup_t ||u_t|| / ||f||
  double analytic_sup = 0.0;  ///< sup_t t ||Delta u_t|| / ||f||
  bool factorization_holds = false;  ///< g_sup <= mi_sup * contraction_sup * analytic_sup
};

/// sup_{t > 0} t^{1/2} ||D e^{-t Delta} g||_p / ||g||_p: log grid on [1e-6, 1e6]
/// refined by golden-section search around the best grid point.
double gradient_semigroup_sup(const WeightedGraph& g, const SpectralDecomposition& dec,
                              const Eigen::Ref<const Eigen::VectorXd>& f, double p);

ChainRecord gp_mip_chain(const WeightedGraph& g, const SpectralDecomposition& dec,
                         const Eigen::Ref<const Eigen::VectorXd>& f, double p, double tol = 1e-8);

}  // namespace graphriesz
