#pragma once

#include "graphriesz/graph.hpp"
#include "graphriesz/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace graphriesz {

/// Vertex or edge quantity derived linearly (or, for the vertex gradient,
/// through the edge differences) from f.
enum class Quantity {
  Function,          ///< f on (V, nu)
  MeanZeroPart,      ///< f - mean_nu(f) on all of (V, nu)
  EdgeGradient,      ///< |Df| on (E, mu)
  VertexGradient,    ///< |grad f| on (V, nu)
  HalfLaplacian,     ///< Delta^{1/2} f on (V, nu)
  Laplacian,         ///< Delta f on (V, nu)
  HeatEdgeGradient,  ///< |D e^{-t Delta} f| on (E, mu)
};

enum class Constraint { None, NonNegative, MeanZero };

enum class FunctionalId { RieszEdge, RieszVertex, ReverseRiesz, MiP, MiPVertex, GP, SobolevP, NormEquiv };

struct Factor {
  Quantity quantity;
  double power;  ///< negative powers are denominators
};

/// Scale-invariant ratio scale * prod_i ||q_i(f)||_p^{power_i}.
struct RatioFunctional {
  FunctionalId id;
  std::string name;
  double p = 2.0;
  double t = 0.0;  ///< heat time for HeatEdgeGradient
  double scale = 1.0;
  Constraint constraint = Constraint::None;
  std::vector<Factor> factors;
  bool level_set_polish = false;  ///< also try superlevel-set indicators of each local optimum
};

/// ||Df||_p / ||Delta^{1/2} f||_p
RatioFunctional riesz_edge(double p);
/// ||grad f||_p / ||Delta^{1/2} f||_p
RatioFunctional riesz_vertex(double p);
/// ||Delta^{1/2} f||_p / ||Df||_p
RatioFunctional reverse_riesz(double p);
/// ||Df||_p^2 / (||f||_p ||Delta f||_p)
RatioFunctional mip(double p);
/// ||grad f||_p^2 / (||f||_p ||Delta f||_p)
RatioFunctional mip_vertex(double p);
/// t^{1/2} ||D e^{-t Delta} f||_p / ||f||_p
RatioFunctional gp(double p, double t);
/// ||f||_p / ||Df||_p over nonnegative f (|f| does at least as well as f).
RatioFunctional sobolev(double p);
/// ||num(f)||_p / ||den(f)||_p
RatioFunctional norm_equiv(Quantity num, Quantity den, double p, Constraint constraint = Constraint::None);

const char* quantity_name(Quantity q);

/// Raised when f lies in the subspace where a denominator vanishes.
class ExcludedSubspace : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluates the functional through the pointwise operators.
double ratio_eval(const WeightedGraph& g, const SpectralDecomposition& dec, const RatioFunctional& F,
                  const Eigen::Ref<const Eigen::VectorXd>& f);

/// Norm of one quantity of f through the pointwise operators.
double quantity_norm(const WeightedGraph& g, const SpectralDecomposition& dec, Quantity q, double p, double t,
                     const Eigen::Ref<const Eigen::VectorXd>& f);

/// Projects f onto the constraint set (|f| or f - mean).
Eigen::VectorXd apply_constraint(const WeightedGraph& g, Constraint c, const Eigen::Ref<const Eigen::VectorXd>& f);

struct Budget {
  int restarts = 64;
  int max_sweeps = 4000;  ///< coordinate sweeps per restart
  double initial_step = 0.5;
  double shrink = 0.5;
  double min_step = 1e-8;
};

struct ExtremalEstimate {
  std::string functional;
  double p = 0.0;
  double t = 0.0;
  double best_ratio = 0.0;
  Eigen::VectorXd witness;
  int restarts = 0;
  int converged_restarts = 0;
  long sweeps = 0;
  bool witness_consistent = false;  ///< direct re-evaluation within 1e-9
  std::uint64_t seed = 0;
};

/// Multi-restart derivative-free coordinate ascent. Restart r draws its start
/// from std::mt19937_64 seeded with seed_seq{seed, r}.
ExtremalEstimate maximize_ratio(const WeightedGraph& g, const SpectralDecomposition& dec, const RatioFunctional& F,
                                const Budget& budget = {}, std::uint64_t seed = 0);

nlohmann::json to_json(const WeightedGraph& g, const ExtremalEstimate& est);

}  // namespace graphriesz
