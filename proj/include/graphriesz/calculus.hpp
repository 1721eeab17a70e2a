#pragma once

#include "graphriesz/graph.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphriesz {

/// Exponent p in [1, inf] with its Hoelder dual.
struct Exponent {
  double p;

  explicit Exponent(double value) : p(value) {
    if (!(value >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  }
  bool infinite() const { return std::isinf(p); }
  double dual() const {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (infinite()) return 1.0;
    return p / (p - 1.0);
  }
};

/// Tolerances for the pointwise and norm identities.
struct Tolerances {
  double identity_abs = 1e-12;
  double norm_rel = 1e-10;
};

// ---------------------------------------------------------------------------
// Weighted norms

/// (sum_i w_i |v_i|^p)^{1/p}, max |v_i| at p = inf. Scaled by max |v_i| to
/// avoid overflow at large p.
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar weighted_lp_norm(const Eigen::MatrixBase<DerivedV>& v,
                                           const Eigen::MatrixBase<DerivedW>& w, double p) {
  using Scalar = typename DerivedV::Scalar;
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  if (v.size() == 0) return Scalar(0);
  const Scalar top = v.cwiseAbs().maxCoeff();
  if (std::isinf(p) || top == Scalar(0)) return top;
  if (p == 2.0) return std::sqrt((w.array().template cast<Scalar>() * v.array().square()).sum());
  if (p == 1.0) return (w.array().template cast<Scalar>() * v.array().abs()).sum();
  const Scalar s = (w.array().template cast<Scalar>() * (v.array().abs() / top).pow(Scalar(p))).sum();
  return top * std::pow(s, Scalar(1.0 / p));
}

/// l^p(V, nu) norm. Accepts interior-indexed functions or functions on all
/// vertices (length decides).
double lp_norm_vertex(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f, double p);
/// l^p(E, mu) norm of an edge function.
double lp_norm_edge(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& h, double p);

/// <f, h> in l^2(V, nu) over the interior.
double inner_product(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& h);

/// nu-weighted mean over all vertices (boundary values are 0).
double nu_mean(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f);

// ---------------------------------------------------------------------------
// Pointwise operators. Inputs are interior-indexed; boundary values are 0.

/// (Delta f)(x) = (1/nu_x) sum_y mu_xy (f(x) - f(y)) at interior x.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> laplacian_apply(
    const WeightedGraph& g, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  if (f.size() != g.num_interior()) throw std::invalid_argument("vertex function length mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(g.num_interior());
  for (Index i = 0; i < g.num_interior(); ++i) {
    const Index x = g.interior_vertex(i);
    Scalar acc(0);
    for (const auto& nb : g.neighbors(x)) {
      const Index j = g.interior_position(nb.vertex);
      const Scalar fy = j < 0 ? Scalar(0) : Scalar(f[j]);
      acc += Scalar(nb.mu) * (Scalar(f[i]) - fy);
    }
    out[i] = acc / Scalar(g.nu()[x]);
  }
  return out;
}

/// Signed differences D_e f = f(v) - f(u) for canonical edges e = {u < v}.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> signed_difference(
    const WeightedGraph& g, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  if (f.size() != g.num_interior()) throw std::invalid_argument("vertex function length mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(g.num_edges());
  auto value = [&](Index v) {
    const Index j = g.interior_position(v);
    return j < 0 ? Scalar(0) : Scalar(f[j]);
  };
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edges()[static_cast<std::size_t>(k)];
    out[k] = value(e.v) - value(e.u);
  }
  return out;
}

/// |Df| on edges.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> diff_edge(const WeightedGraph& g,
                                                                    const Eigen::MatrixBase<Derived>& f) {
  return signed_difference(g, f).cwiseAbs();
}

/// |grad f| from precomputed edge differences, on all vertices.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> grad_from_differences(
    const WeightedGraph& g, const Eigen::MatrixBase<Derived>& df) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sq = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(g.num_vertices());
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edges()[static_cast<std::size_t>(k)];
    const Scalar c = Scalar(e.mu) * df[k] * df[k];
    sq[e.u] += c;
    sq[e.v] += c;
  }
  for (Index v = 0; v < g.num_vertices(); ++v) sq[v] = std::sqrt(sq[v] / (Scalar(2) * Scalar(g.nu()[v])));
  return sq;
}

/// |grad f|(x) = sqrt((1/(2 nu_x)) sum_y mu_xy (f(x)-f(y))^2) on ALL vertices,
/// so that its l^2(V, nu) norm squared equals the Dirichlet energy.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> grad_vertex(const WeightedGraph& g,
                                                                      const Eigen::MatrixBase<Derived>& f) {
  return grad_from_differences(g, signed_difference(g, f));
}

/// Q(f) = 1/2 sum_{x,y} mu_xy (f(x)-f(y))^2 = sum_e mu_e (D_e f)^2.
template <typename Derived>
typename Derived::Scalar dirichlet_energy(const WeightedGraph& g, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  const auto d = signed_difference(g, f);
  Scalar acc(0);
  for (Index k = 0; k < g.num_edges(); ++k) acc += Scalar(g.edges()[static_cast<std::size_t>(k)].mu) * d[k] * d[k];
  return acc;
}

/// Dense matrix of Delta on the interior (not symmetric unless nu is constant).
Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g);
/// Dense signed difference matrix, edges x interior vertices.
Eigen::MatrixXd difference_matrix(const WeightedGraph& g);

// ---------------------------------------------------------------------------
// Pseudo-gradient kernel

/// gamma_p(a, b) = p a (a - b) - a^{2-p} (a^p - b^p) for a, b >= 0, p in (1, 2].
/// Evaluated as a^2 (expm1(p x) - p expm1(x)) with x = log(b/a), with a Taylor
/// series near a = b to avoid cancellation. gamma_p(0, b) = 0 for p < 2 and
/// gamma_2(a, b) = (a - b)^2.
template <typename Scalar>
Scalar gamma_p(Scalar alpha, Scalar beta, Scalar p) {
  if (alpha < Scalar(0) || beta < Scalar(0)) throw std::domain_error("gamma_p: negative argument");
  if (!(p > Scalar(1)) || p > Scalar(2)) throw std::domain_error("gamma_p: p must lie in (1, 2]");
  if (p == Scalar(2)) return (alpha - beta) * (alpha - beta);
  if (alpha == Scalar(0)) return Scalar(0);
  if (beta == Scalar(0)) return (p - Scalar(1)) * alpha * alpha;
  const Scalar x = std::log(beta / alpha);
  Scalar core;
  if (std::abs(x) < Scalar(1e-2)) {
    // sum_{k>=2} (p^k - p) x^k / k!
    core = Scalar(0);
    Scalar pk = p;
    Scalar xk = Scalar(1);
    Scalar fact = Scalar(1);
    for (int k = 1; k <= 14; ++k) {
      xk *= x;
      fact *= Scalar(k);
      if (k >= 2) core += (pk - p) * xk / fact;
      pk *= p;
    }
  } else {
    core = std::expm1(p * x) - p * std::expm1(x);
  }
  return alpha * alpha * core;
}

/// p(p-1)(a-b)^2 int_0^1 (1-u) a^{2-p} / ((1-u) a + u b)^{2-p} du by
/// tanh-sinh quadrature. Independent route to gamma_p.
double gamma_p_integral_form(double alpha, double beta, double p);

/// Gamma_p(f)(x) = sum_y (mu_xy / nu_x) gamma_p(f(x), f(y)) at interior x.
/// Also evaluates p f Delta f - f^{2-p} Delta(f^p) and throws std::logic_error
/// if the two disagree beyond `tol` (relative to the magnitude of the terms).
Eigen::VectorXd pseudo_gradient(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f, double p,
                                double tol = 1e-10);
/// The p f Delta f - f^{2-p} Delta(f^p) form only.
Eigen::VectorXd pseudo_gradient_direct(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f, double p);

// ---------------------------------------------------------------------------
// Necessary condition for the vertex-gradient multiplicative inequality at a
// Dirac mass (normalized measure nu = deg).

struct MipSides {
  double lhs = 0.0;           ///< (deg_x + sum_y mu^{p/2} deg_y^{1-p/2})^2
  double rhs_factor = 0.0;    ///< deg_x (deg_x + sum_y mu^p deg_y^{1-p})
  bool cross_checked = false; ///< nu = deg at x and its neighbors, direct norms compared
  double direct_lhs = 0.0;    ///< (2^{p/2} |||grad delta_x|||_p^p)^2
  double direct_rhs = 0.0;    ///< ||delta_x||_p^p ||Delta delta_x||_p^p
};

MipSides char_mip_sides(const WeightedGraph& g, Index x, double p);

}  // namespace graphriesz
