#include "graphriesz/littlewood_paley.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace graphriesz {
namespace {

// Non-kernel modes present in f, with their edge differences.
struct ActiveModes {
  Eigen::VectorXd lambda;
  Eigen::VectorXd c;
  Eigen::MatrixXd dphi;  // edges x modes
  double slowest = std::numeric_limits<double>::infinity();
};

ActiveModes active_modes(const WeightedGraph& g, const SpectralDecomposition& dec,
                         const Eigen::Ref<const Eigen::VectorXd>& f) {
  const Eigen::VectorXd c = dec.coefficients(f);
  const double top = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Index> keep;
  for (Index k = dec.kernel_dimension(); k < dec.size(); ++k)
    if (std::abs(c[k]) > 1e-12 * top) keep.push_back(k);
  ActiveModes m;
  const auto m_size = static_cast<Index>(keep.size());
  m.lambda.resize(m_size);
  m.c.resize(m_size);
  Eigen::MatrixXd phi(dec.size(), m_size);
  for (Index j = 0; j < m_size; ++j) {
    const Index k = keep[static_cast<std::size_t>(j)];
    m.lambda[j] = dec.eigenvalues()[k];
    m.c[j] = c[k];
    phi.col(j) = dec.eigenfunctions().col(k);
    m.slowest = std::min(m.slowest, m.lambda[j]);
  }
  m.dphi = difference_matrix(g) * phi;
  return m;
}

void require_convergent(const ActiveModes& m, double a) {
  if (m.lambda.size() > 0 && !(a < 2.0 * m.slowest))
    throw std::domain_error("tilt a = " + std::to_string(a) + " diverges; need a < " + std::to_string(2.0 * m.slowest));
}

// Integrates integrand(t) over [0, inf) in doubling windows until the
// analytic tail bound tail(T) is below tail_rel of the accumulated integral.
Eigen::VectorXd integrate_to_infinity(const std::function<Eigen::VectorXd(double)>& integrand,
                                      const std::function<Eigen::VectorXd(double)>& tail, double fast_rate,
                                      double slow_rate, double scale, const LpsQuadrature& opts) {
  std::vector<double> breaks{0.0};
  const double h = 0.25 / std::max(fast_rate, 1e-300);
  double T = 8.0 / slow_rate;
  for (double b = h; b < T; b *= 2.0) breaks.push_back(b);
  breaks.push_back(T);
  const double abs_tol = 1e-14 * scale;
  Eigen::VectorXd total = integrate_adaptive(integrand, breaks, opts.rel_tol, abs_tol, opts.max_panels).value;
  const double limit = 1e6 / slow_rate;
  while (T < limit) {
    const Eigen::VectorXd bound = tail(T);
    const double floor = 1e-12 * total.maxCoeff();
    bool done = true;
    for (Index i = 0; i < total.size(); ++i)
      if (bound[i] > opts.tail_rel * std::max(total[i], floor)) done = false;
    if (done) break;
    const double window[] = {T, 2.0 * T};
    total += integrate_adaptive(integrand, window, opts.rel_tol, abs_tol, opts.max_panels).value;
    T *= 2.0;
  }
  return total;
}

Eigen::VectorXd gamma_sum(const WeightedGraph& g, const Eigen::VectorXd& u, double p) {
  const Eigen::VectorXd full = g.extend(u);
  Eigen::VectorXd out(g.num_interior());
  for (Index i = 0; i < g.num_interior(); ++i) {
    const Index x = g.interior_vertex(i);
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) acc += nb.mu * gamma_p(full[x], full[nb.vertex], p);
    out[i] = acc / g.nu()[x];
  }
  return out;
}

}  // namespace

double lps_divergence_threshold(const WeightedGraph& g, const SpectralDecomposition& dec,
                                const Eigen::Ref<const Eigen::VectorXd>& f) {
  return 2.0 * active_modes(g, dec, f).slowest;
}

Eigen::VectorXd lps_H(const WeightedGraph& g, const SpectralDecomposition& dec,
                      const Eigen::Ref<const Eigen::VectorXd>& f, double a) {
  const ActiveModes m = active_modes(g, dec, f);
  require_convergent(m, a);
  const Index k = m.lambda.size();
  if (k == 0) return Eigen::VectorXd::Zero(g.num_edges());
  Eigen::MatrixXd G(k, k);
  for (Index j = 0; j < k; ++j)
    for (Index l = 0; l < k; ++l) G(j, l) = 1.0 / (m.lambda[j] + m.lambda[l] - a);
  const Eigen::MatrixXd W = m.dphi * m.c.asDiagonal();
  const Eigen::VectorXd sq = (W * G).cwiseProduct(W).rowwise().sum();
  return sq.cwiseMax(0.0).cwiseSqrt();
}

Eigen::VectorXd lps_H_quadrature(const WeightedGraph& g, const SpectralDecomposition& dec,
                                 const Eigen::Ref<const Eigen::VectorXd>& f, double a, const LpsQuadrature& opts) {
  const ActiveModes m = active_modes(g, dec, f);
  require_convergent(m, a);
  if (m.lambda.size() == 0) return Eigen::VectorXd::Zero(g.num_edges());
  const double rate = 2.0 * m.slowest - a;
  const Eigen::VectorXd S = m.dphi.cwiseAbs() * m.c.cwiseAbs();
  const Eigen::VectorXd S2 = S.cwiseProduct(S);
  auto integrand = [&](double t) -> Eigen::VectorXd {
    const Eigen::VectorXd w = (-m.lambda * t).array().exp() * m.c.array();
    const Eigen::VectorXd du = m.dphi * w;
    return std::exp(a * t) * du.cwiseProduct(du);
  };
  auto tail = [&](double T) -> Eigen::VectorXd { return S2 * (std::exp(-rate * T) / rate); };
  const double fast = 2.0 * m.lambda.maxCoeff() - a;
  const Eigen::VectorXd I = integrate_to_infinity(integrand, tail, fast, rate, S2.maxCoeff() / rate, opts);
  return I.cwiseMax(0.0).cwiseSqrt();
}

Eigen::VectorXd lps_Hpa(const WeightedGraph& g, const SpectralDecomposition& dec,
                        const Eigen::Ref<const Eigen::VectorXd>& f, double p, double a, const LpsQuadrature& opts) {
  if ((f.array() < 0.0).any()) throw std::domain_error("H_{p,a} needs a nonnegative function");
  if (!(p > 1.0) || p > 2.0) throw std::domain_error("H_{p,a} needs p in (1, 2]");
  const ActiveModes m = active_modes(g, dec, f);
  require_convergent(m, a);
  if (m.lambda.size() == 0) return Eigen::VectorXd::Zero(g.num_interior());
  const Eigen::VectorXd c = dec.coefficients(f);
  Eigen::VectorXd lambda(dec.size());
  for (Index k = 0; k < dec.size(); ++k) lambda[k] = dec.lambda(k);
  const double rate = 2.0 * m.slowest - a;
  // Gamma_p(u) <= (p-1) |grad u|^2 and |Du|(e) <= e^{-lambda_min t} S_e
  const Eigen::VectorXd S = m.dphi.cwiseAbs() * m.c.cwiseAbs();
  Eigen::VectorXd vertex_S2 = Eigen::VectorXd::Zero(g.num_vertices());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edges()[static_cast<std::size_t>(e)];
    vertex_S2[edge.u] += edge.mu * S[e] * S[e];
    vertex_S2[edge.v] += edge.mu * S[e] * S[e];
  }
  Eigen::VectorXd bound_coeff(g.num_interior());
  for (Index i = 0; i < g.num_interior(); ++i) {
    const Index x = g.interior_vertex(i);
    bound_coeff[i] = (p - 1.0) * vertex_S2[x] / (2.0 * g.nu()[x]);
  }
  const Eigen::MatrixXd& phi = dec.eigenfunctions();
  auto integrand = [&](double t) -> Eigen::VectorXd {
    const Eigen::VectorXd w = (-lambda * t).array().exp() * c.array();
    const Eigen::VectorXd u = (phi * w).cwiseMax(0.0);
    return std::exp(a * t) * gamma_sum(g, u, p);
  };
  auto tail = [&](double T) -> Eigen::VectorXd { return bound_coeff * (std::exp(-rate * T) / rate); };
  const double fast = 2.0 * m.lambda.maxCoeff() - a;
  const double scale = std::max(bound_coeff.maxCoeff() / rate, 1e-300);
  const Eigen::VectorXd I = integrate_to_infinity(integrand, tail, fast, rate, scale, opts);
  return I.cwiseMax(0.0).cwiseSqrt();
}

Eigen::VectorXd lps_H2a_closed(const WeightedGraph& g, const SpectralDecomposition& dec,
                               const Eigen::Ref<const Eigen::VectorXd>& f, double a) {
  const Eigen::VectorXd H = lps_H(g, dec, f, a);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.num_vertices());
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edges()[static_cast<std::size_t>(e)];
    acc[edge.u] += edge.mu * H[e] * H[e];
    acc[edge.v] += edge.mu * H[e] * H[e];
  }
  return g.restrict(acc.cwiseQuotient(g.nu())).cwiseSqrt();
}

double lps_key_constant(const WeightedGraph& g, double p) {
  if (!(p > 1.0) || p > 2.0) throw std::domain_error("lps_key_constant needs p in (1, 2]");
  double worst = 0.0;
  for (Index x : g.interior()) {
    double s = 0.0;
    for (const auto& nb : g.neighbors(x)) s += std::pow(nb.mu, 1.0 - p / 2.0);
    worst = std::max(worst, std::pow(g.nu()[x], p / 2.0 - 1.0) * s);
  }
  return std::pow(std::pow(p - 1.0, -p / 2.0) * worst, 1.0 / p);
}

LpsRatios lps_ratios(const WeightedGraph& g, const SpectralDecomposition& dec,
                     std::span<const Eigen::VectorXd> samples, double p, double a, const LpsQuadrature& opts) {
  LpsRatios r;
  r.p = p;
  r.a = a;
  r.key_constant = lps_key_constant(g, p);
  for (const auto& f : samples) {
    const double nf = lp_norm_vertex(g, f, p);
    if (nf == 0.0) continue;
    ++r.samples;
    r.H_ratio = std::max(r.H_ratio, lp_norm_edge(g, lps_H(g, dec, f, a), p) / nf);
    const Eigen::VectorXd fp = f.cwiseMax(0.0);
    const Eigen::VectorXd fm = (-f).cwiseMax(0.0);
    double split = 0.0;
    if (fp.any()) split += lp_norm_edge(g, lps_H(g, dec, fp, a), p);
    if (fm.any()) split += lp_norm_edge(g, lps_H(g, dec, fm, a), p);
    r.split_ratio = std::max(r.split_ratio, split / nf);

    const Eigen::VectorXd h = f.cwiseAbs();
    const double nh = lp_norm_vertex(g, h, p);
    const double hpa = lp_norm_vertex(g, lps_Hpa(g, dec, h, p, a, opts), p);
    const double ha = lp_norm_edge(g, lps_H(g, dec, h, a), p);
    r.Hpa_ratio = std::max(r.Hpa_ratio, hpa / nh);
    if (hpa > 0.0) r.key_ratio = std::max(r.key_ratio, ha / hpa);
    if (ha > r.key_constant * hpa * (1.0 + 1e-8) + 1e-14) r.key_holds = false;
  }
  return r;
}

}  // namespace graphriesz
