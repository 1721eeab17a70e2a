#include "graphriesz/calculus.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <string>

namespace graphriesz {

double lp_norm_vertex(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f, double p) {
  if (f.size() == g.num_interior()) return weighted_lp_norm(f, g.nu_interior(), p);
  if (f.size() == g.num_vertices()) return weighted_lp_norm(f, g.nu(), p);
  throw std::invalid_argument("vertex function length mismatch");
}

double lp_norm_edge(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& h, double p) {
  if (h.size() != g.num_edges()) throw std::invalid_argument("edge function length mismatch");
  return weighted_lp_norm(h, g.edge_weights(), p);
}

double inner_product(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& h) {
  if (f.size() != g.num_interior() || h.size() != g.num_interior())
    throw std::invalid_argument("vertex function length mismatch");
  return (f.array() * h.array() * g.nu_interior().array()).sum();
}

double nu_mean(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f) {
  if (f.size() != g.num_interior()) throw std::invalid_argument("vertex function length mismatch");
  return (f.array() * g.nu_interior().array()).sum() / g.nu().sum();
}

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
  const Index n = g.num_interior();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index x = g.interior_vertex(i);
    const double inv = 1.0 / g.nu()[x];
    L(i, i) = g.degree()[x] * inv;
    for (const auto& nb : g.neighbors(x)) {
      const Index j = g.interior_position(nb.vertex);
      if (j >= 0) L(i, j) -= nb.mu * inv;
    }
  }
  return L;
}

Eigen::MatrixXd difference_matrix(const WeightedGraph& g) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(g.num_edges(), g.num_interior());
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edges()[static_cast<std::size_t>(k)];
    if (Index j = g.interior_position(e.v); j >= 0) D(k, j) += 1.0;
    if (Index j = g.interior_position(e.u); j >= 0) D(k, j) -= 1.0;
  }
  return D;
}

double gamma_p_integral_form(double alpha, double beta, double p) {
  if (alpha < 0.0 || beta < 0.0) throw std::domain_error("gamma_p: negative argument");
  if (!(p > 1.0) || p > 2.0) throw std::domain_error("gamma_p: p must lie in (1, 2]");
  if (alpha == 0.0 && beta == 0.0) return 0.0;
  if (alpha == 0.0 && p < 2.0) return 0.0;
  const double q = 2.0 - p;
  auto integrand = [&](double u, double uc) {
    // uc is the signed distance to the nearest endpoint
    const double one_minus_u = uc > 0.0 ? uc : 1.0 - u;
    const double denom = one_minus_u * alpha + u * beta;
    if (denom <= 0.0) return 0.0;
    return one_minus_u * std::pow(alpha / denom, q);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double integral = integrator.integrate(integrand, 0.0, 1.0, 1e-14);
  return p * (p - 1.0) * (alpha - beta) * (alpha - beta) * integral;
}

namespace {

void require_nonnegative(const Eigen::Ref<const Eigen::VectorXd>& f) {
  if ((f.array() < 0.0).any()) throw std::domain_error("pseudo-gradient needs a nonnegative function");
}

}  // namespace

Eigen::VectorXd pseudo_gradient_direct(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f,
                                       double p) {
  require_nonnegative(f);
  if (!(p > 1.0) || p > 2.0) throw std::domain_error("pseudo-gradient needs p in (1, 2]");
  const Eigen::VectorXd fp = f.array().pow(p);
  const Eigen::VectorXd lf = laplacian_apply(g, f);
  const Eigen::VectorXd lfp = laplacian_apply(g, fp);
  Eigen::VectorXd out(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    const double f2p = (p == 2.0 || f[i] > 0.0) ? std::pow(f[i], 2.0 - p) : 0.0;
    out[i] = p * f[i] * lf[i] - f2p * lfp[i];
  }
  return out;
}

Eigen::VectorXd pseudo_gradient(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& f, double p,
                                double tol) {
  require_nonnegative(f);
  if (!(p > 1.0) || p > 2.0) throw std::domain_error("pseudo-gradient needs p in (1, 2]");
  const Eigen::VectorXd full = g.extend(f);
  Eigen::VectorXd out(g.num_interior());
  Eigen::VectorXd scale(g.num_interior());
  for (Index i = 0; i < g.num_interior(); ++i) {
    const Index x = g.interior_vertex(i);
    const double a = full[x];
    double acc = 0.0;
    double mag = 0.0;
    for (const auto& nb : g.neighbors(x)) {
      const double b = full[nb.vertex];
      acc += nb.mu * gamma_p(a, b, p);
      const double a2p = (p == 2.0 || a > 0.0) ? std::pow(a, 2.0 - p) : 0.0;
      mag += nb.mu * (p * a * (a + b) + a2p * (std::pow(a, p) + std::pow(b, p)));
    }
    out[i] = acc / g.nu()[x];
    scale[i] = mag / g.nu()[x];
  }
  const Eigen::VectorXd direct = pseudo_gradient_direct(g, f, p);
  for (Index i = 0; i < out.size(); ++i) {
    if (std::abs(out[i] - direct[i]) > tol * (1.0 + scale[i]))
      throw std::logic_error("pseudo-gradient formulas disagree at interior vertex " + std::to_string(i));
  }
  return out;
}

MipSides char_mip_sides(const WeightedGraph& g, Index x, double p) {
  if (x < 0 || x >= g.num_vertices()) throw std::invalid_argument("vertex out of range");
  if (g.is_boundary(x)) throw std::invalid_argument("char_mip_sides: vertex '" + g.id(x) + "' is on the boundary");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("char_mip_sides needs p in [1, inf)");
  const auto& deg = g.degree();
  MipSides out;
  double first = deg[x];
  double second = deg[x];
  bool normalized = std::abs(g.nu()[x] - deg[x]) <= 1e-12 * deg[x];
  for (const auto& nb : g.neighbors(x)) {
    const double dy = deg[nb.vertex];
    first += std::pow(nb.mu, p / 2.0) * std::pow(dy, 1.0 - p / 2.0);
    second += std::pow(nb.mu, p) * std::pow(dy, 1.0 - p);
    normalized = normalized && !g.is_boundary(nb.vertex) && std::abs(g.nu()[nb.vertex] - dy) <= 1e-12 * dy;
  }
  out.lhs = first * first;
  out.rhs_factor = deg[x] * second;
  if (normalized) {
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(g.num_interior());
    delta[g.interior_position(x)] = 1.0;
    // only x and its neighbors carry mass; the norms are evaluated on the whole graph
    const double grad_p = std::pow(lp_norm_vertex(g, grad_vertex(g, delta), p), p);
    const double f_p = std::pow(lp_norm_vertex(g, delta, p), p);
    const double lap_p = std::pow(lp_norm_vertex(g, laplacian_apply(g, delta), p), p);
    const double lhs_root = std::pow(2.0, p / 2.0) * grad_p;
    out.direct_lhs = lhs_root * lhs_root;
    out.direct_rhs = f_p * lap_p;
    out.cross_checked = true;
  }
  return out;
}

}  // namespace graphriesz
