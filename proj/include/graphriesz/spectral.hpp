#pragma once

#include "graphriesz/graph.hpp"

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <vector>

namespace graphriesz {

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int sweeps) : std::runtime_error(what), sweeps_(sweeps) {}
  int sweeps() const { return sweeps_; }

 private:
  int sweeps_;
};

struct JacobiOptions {
  double tolerance = 1e-13;  ///< off-diagonal Frobenius norm relative to the full norm
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix. Eigenvalues come back
/// unsorted, eigenvectors as columns.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, const JacobiOptions& opts = {});

/// nu-orthonormal eigenpairs of Delta on the interior, ascending.
///
/// Ties (eigenvalues equal up to 1e-10 max(1, lambda_max)) are ordered by the
/// index of the first maximal-magnitude entry; each eigenfunction has that
/// entry positive.
class SpectralDecomposition {
 public:
  SpectralDecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions, Eigen::VectorXd nu,
                        int sweeps);

  Index size() const { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Columns phi_k, interior-indexed.
  const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
  const Eigen::VectorXd& nu() const { return nu_; }
  Index kernel_dimension() const { return kernel_dimension_; }
  double zero_threshold() const { return zero_threshold_; }
  bool in_kernel(Index k) const { return k < kernel_dimension_; }
  int sweeps() const { return sweeps_; }

  /// lambda_k with kernel modes reported as exactly 0.
  double lambda(Index k) const { return in_kernel(k) ? 0.0 : eigenvalues_[k]; }
  /// Smallest eigenvalue above the zero threshold (nullopt if none).
  std::optional<double> gap_above_zero() const;

  /// c_k = <f, phi_k>_nu
  Eigen::VectorXd coefficients(const Eigen::Ref<const Eigen::VectorXd>& f) const;
  Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& c) const;
  /// Projection of f onto the kernel of Delta.
  Eigen::VectorXd kernel_projection(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  /// sum_k w_k c_k phi_k for spectral weights w.
  Eigen::VectorXd apply_weights(const Eigen::Ref<const Eigen::VectorXd>& f,
                                const Eigen::Ref<const Eigen::VectorXd>& weights) const;
  /// Dense operator Phi diag(w) Phi^T N.
  Eigen::MatrixXd operator_matrix(const Eigen::Ref<const Eigen::VectorXd>& weights) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenfunctions_;
  Eigen::VectorXd nu_;
  Index kernel_dimension_ = 0;
  double zero_threshold_ = 0.0;
  int sweeps_ = 0;
};

SpectralDecomposition spectral_decompose(const WeightedGraph& g, const JacobiOptions& opts = {});

/// e^{-t Delta} f.
Eigen::VectorXd heat_apply(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f, double t);
Eigen::MatrixXd heat_matrix(const SpectralDecomposition& dec, double t);

/// Delta^s f. Kernel modes are dropped for s > 0, kept for s = 0; for s < 0
/// this is the pseudo-inverse power and f must have no kernel component
/// (relative `tol`), otherwise std::domain_error.
Eigen::VectorXd frac_power_apply(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f,
                                 double s, double tol = 1e-9);
Eigen::MatrixXd frac_power_matrix(const SpectralDecomposition& dec, double s);

/// f*(x) = sup_{t>0} |e^{-t Delta} f(x)| on a log grid over [1e-6, 1e6] plus the
/// exact endpoints |f| (t -> 0) and |P_ker f| (t -> inf).
Eigen::VectorXd maximal_function(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f,
                                 int grid_points = 200);

struct SemigroupNorm {
  double t = 0.0;
  double p = 0.0;
  double norm = 0.0;   ///< exact for p in {1, 2, inf}, otherwise a lower bound
  bool exact = false;
  double interpolation_bound = 0.0;  ///< Riesz-Thorin between p = 1 and p = 2
  std::optional<double> stated_bound; ///< e^{-2 lambda_0 (p-1) t}, p in (1, 2]
};

/// ||e^{-t Delta}||_{p -> p} on l^p(V, nu).
SemigroupNorm semigroup_pnorm(const SpectralDecomposition& dec, double t, double p);

struct CheegerResult {
  double h = 0.0;
  std::vector<Index> witness;  ///< vertex positions of the minimizing set
  double boundary_weight = 0.0;
  double volume = 0.0;
};

/// Exact min over nonempty interior subsets of mu(dOmega) / nu(Omega) by
/// enumeration. Ties go to the smaller set, then lexicographic order.
CheegerResult cheeger_exact(const WeightedGraph& g, Index cap = 22);

struct CheegerBounds {
  double lower = 0.0;   ///< lambda_0 (the indicator of any set is a Rayleigh test function)
  CheegerResult upper;  ///< best superlevel set of the ground state
};

/// Bounds on h for graphs beyond the enumeration cap.
CheegerBounds cheeger_bounds(const WeightedGraph& g, const SpectralDecomposition& dec);

struct GapReport {
  double bottom = 0.0;
  std::optional<double> gap_above_zero;
  std::optional<CheegerResult> cheeger;
  double M = 0.0;
  Index kernel_dimension = 0;
};

GapReport gap_report(const WeightedGraph& g, const SpectralDecomposition& dec, bool with_cheeger, Index cap = 22);

}  // namespace graphriesz
