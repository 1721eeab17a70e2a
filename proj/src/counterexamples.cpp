#include "graphriesz/counterexamples.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/families.hpp"
#include "graphriesz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphriesz {

Eigen::VectorXd lattice_tent(const WeightedGraph& lattice, Index K, Index k) {
  if (k < 1) throw std::invalid_argument("tent needs k >= 1");
  if (k > K - 1) throw std::invalid_argument("tent support {1..k-1} must stay inside the truncation (k <= K - 1)");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(lattice.num_interior());
  for (Index i = 1; i < k; ++i) {
    const auto v = lattice.find(std::to_string(i));
    if (!v) throw std::invalid_argument("lattice site " + std::to_string(i) + " missing");
    f[lattice.interior_position(*v)] = 1.0 - static_cast<double>(i) / static_cast<double>(k);
  }
  return f;
}

namespace {

std::pair<double, double> lattice_norms(Index K, double eps, double p, Index k) {
  const WeightedGraph g = eps_lattice(K, eps);
  const Eigen::VectorXd f = lattice_tent(g, K, k);
  return {lp_norm_vertex(g, grad_vertex(g, f), p), lp_norm_edge(g, diff_edge(g, f), p)};
}

}  // namespace

LatticeResult counterexample_nonequiv(Index K, std::span<const double> eps, double p, Index k) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("counterexample_nonequiv needs p in (1, 2)");
  LatticeResult out;
  out.p = p;
  out.K = K;
  out.k = k;
  out.expected = 0.5 - 1.0 / p;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double e : eps) {
    const auto [grad, edge] = lattice_norms(K, e, p, k);
    const auto [grad2, edge2] = lattice_norms(2 * K, e, p, k);
    out.truncation_gap = std::max({out.truncation_gap, std::abs(grad2 - grad) / grad, std::abs(edge2 - edge) / edge});
    out.rows.push_back({e, grad, edge, grad / edge});
    xs.push_back(e);
    ys.push_back(grad / edge);
  }
  if (xs.size() >= 2) out.slope = fit_loglog_slope(xs, ys);
  return out;
}

TreeResult counterexample_tree(std::span<const Index> ns, double p) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("counterexample_tree needs p in (1, 2]");
  TreeResult out;
  out.p = p;
  out.expected = 2.0 - p;
  std::vector<double> xs, lhs, chr, mi, mip;
  for (Index n : ns) {
    const WeightedGraph g = expanding_tree(n, 2 * n + 2);
    const Index x = *g.find(expanding_tree_spine_id(2 * n));
    const MipSides sides = char_mip_sides(g, x, p);
    TreeRow row;
    row.n = n;
    row.lhs = sides.lhs;
    row.rhs_factor = sides.rhs_factor;
    row.char_ratio = sides.lhs / sides.rhs_factor;
    row.cross_checked = sides.cross_checked;
    if (sides.cross_checked) {
      row.cross_check_error = std::max(std::abs(sides.direct_lhs - sides.lhs) / sides.lhs,
                                       std::abs(sides.direct_rhs - sides.rhs_factor) / sides.rhs_factor);
      row.mi_power_ratio = sides.direct_lhs / sides.direct_rhs;
    }
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(g.num_interior());
    delta[g.interior_position(x)] = 1.0;
    const double grad = lp_norm_vertex(g, grad_vertex(g, delta), p);
    row.mi_ratio = grad * grad / (lp_norm_vertex(g, delta, p) * lp_norm_vertex(g, laplacian_apply(g, delta), p));
    out.max_rhs_factor = std::max(out.max_rhs_factor, row.rhs_factor);
    out.rows.push_back(row);
    xs.push_back(static_cast<double>(n));
    lhs.push_back(row.lhs);
    chr.push_back(row.char_ratio);
    mi.push_back(row.mi_ratio);
    mip.push_back(row.mi_power_ratio > 0.0 ? row.mi_power_ratio : row.char_ratio);
  }
  if (xs.size() >= 2) {
    out.lhs_exponent = fit_loglog_slope(xs, lhs);
    out.char_ratio_exponent = fit_loglog_slope(xs, chr);
    out.mi_exponent = fit_loglog_slope(xs, mi);
    out.mi_power_exponent = fit_loglog_slope(xs, mip);
  }
  return out;
}

namespace {

struct HeatGradient {
  const WeightedGraph& g;
  const SpectralDecomposition& dec;
  Eigen::MatrixXd dphi;

  HeatGradient(const WeightedGraph& graph, const SpectralDecomposition& d)
      : g(graph), dec(d), dphi(difference_matrix(graph) * d.eigenfunctions()) {}

  // ||D e^{-t Delta} g||_p from spectral coefficients c
  double norm(const Eigen::VectorXd& c, double t, double p) const {
    Eigen::VectorXd w(c.size());
    for (Index k = 0; k < c.size(); ++k) w[k] = std::exp(-dec.lambda(k) * t) * c[k];
    return lp_norm_edge(g, (dphi * w).cwiseAbs(), p);
  }
};

double log_grid(int i, int points) { return std::pow(10.0, -6.0 + 12.0 * i / (points - 1)); }

double semigroup_sup(const HeatGradient& hg, const Eigen::VectorXd& c, double p) {
  constexpr int points = 241;
  auto h = [&](double log_t) {
    const double t = std::exp(log_t);
    return std::sqrt(t) * hg.norm(c, t, p);
  };
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < points; ++i) {
    const double v = h(std::log(log_grid(i, points)));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = std::log(log_grid(std::max(best - 1, 0), points));
  double hi = std::log(log_grid(std::min(best + 1, points - 1), points));
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = h(a);
  double fb = h(b);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = h(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = h(b);
    }
  }
  return std::max({best_value, fa, fb});
}

}  // namespace

double gradient_semigroup_sup(const WeightedGraph& g, const SpectralDecomposition& dec,
                              const Eigen::Ref<const Eigen::VectorXd>& f, double p) {
  const double nf = lp_norm_vertex(g, f, p);
  if (nf == 0.0) return 0.0;
  const HeatGradient hg(g, dec);
  return semigroup_sup(hg, dec.coefficients(f), p) / nf;
}

ChainRecord gp_mip_chain(const WeightedGraph& g, const SpectralDecomposition& dec,
                         const Eigen::Ref<const Eigen::VectorXd>& f, double p, double tol) {
  ChainRecord r;
  const HeatGradient hg(g, dec);
  const double nf = lp_norm_vertex(g, f, p);
  const Eigen::VectorXd lf = laplacian_apply(g, f);
  const double nl = lp_norm_vertex(g, lf, p);
  r.T1 = lp_norm_edge(g, diff_edge(g, f), p);
  if (nf == 0.0 || nl <= 1e-12 * std::max(1.0, bl_constant(g)) * nf) {
    r.degenerate = true;
    r.chain_holds = r.T1 <= 1e-10 * std::max(nf, 1e-300);
    r.factorization_holds = true;
    return r;
  }
  const Eigen::VectorXd cf = dec.coefficients(f);
  const Eigen::VectorXd cl = dec.coefficients(lf);
  r.t_star = nf / nl;
  r.C_G = std::max(semigroup_sup(hg, cf, p) / nf, semigroup_sup(hg, cl, p) / nl);
  std::vector<double> breaks{0.0};
  for (int j = 30; j >= 0; --j) breaks.push_back(r.t_star * std::ldexp(1.0, -j));
  auto integrand = [&](double s) -> Eigen::VectorXd {
    Eigen::VectorXd v(1);
    v[0] = hg.norm(cl, s, p);
    return v;
  };
  const double tail = integrate_adaptive(integrand, breaks, 1e-12, 0.0).value[0];
  r.T2 = hg.norm(cf, r.t_star, p) + tail;
  r.T3 = r.C_G * (nf / std::sqrt(r.t_star) + 2.0 * std::sqrt(r.t_star) * nl);
  r.mi_ratio = r.T1 * r.T1 / (nf * nl);
  r.composed = 9.0 * r.C_G * r.C_G;
  r.chain_holds = r.T1 <= r.T2 * (1.0 + tol) && r.T2 <= r.T3 * (1.0 + tol) && r.mi_ratio <= r.composed * (1.0 + tol);

  constexpr int points = 241;
  for (int i = 0; i < points; ++i) {
    const double t = log_grid(i, points);
    const Eigen::VectorXd u = heat_apply(dec, f, t);
    const double un = lp_norm_vertex(g, u, p);
    const double du = lp_norm_edge(g, diff_edge(g, u), p);
    const double lu = lp_norm_vertex(g, laplacian_apply(g, u), p);
    r.g_sup = std::max(r.g_sup, t * du * du / (nf * nf));
    r.contraction_sup = std::max(r.contraction_sup, un / nf);
    r.analytic_sup = std::max(r.analytic_sup, t * lu / nf);
    if (lu > 1e-12 * un && un > 0.0) r.mi_sup = std::max(r.mi_sup, du * du / (un * lu));
  }
  r.factorization_holds = r.g_sup <= r.mi_sup * r.contraction_sup * r.analytic_sup * (1.0 + tol) + 1e-300;
  return r;
}

}  // namespace graphriesz
