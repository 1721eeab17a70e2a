#include "doctest.h"
#include "oracles.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/families.hpp"
#include "graphriesz/littlewood_paley.hpp"

#include <limits>

using namespace graphriesz;

namespace {

// H_a f(e)^2 = d_e^T X d_e with (L - a/2) X + X (L - a/2)^T = f f^T, solved
// as a Kronecker system. Edges in g.edges() order; boundary endpoints drop out.
// Without boundary the constant part of f is removed (D kills it) and L is
// shifted by the projector onto constants so the system is regular.
Eigen::VectorXd lyapunov_H(const WeightedGraph& g, Eigen::VectorXd f, double a) {
  const Index n = g.num_interior();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd A = oracle::laplacian(g) - 0.5 * a * I;
  if (!g.has_boundary()) {
    const Eigen::VectorXd nu = g.nu_interior();
    f.array() -= f.dot(nu) / nu.sum();
    A += Eigen::VectorXd::Ones(n) * nu.transpose() / nu.sum();
  }
  Eigen::MatrixXd K(n * n, n * n);
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X), column-major vec
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) K.block(i * n, j * n, n, n) = I(i, j) * A + A(i, j) * I;
  const Eigen::MatrixXd rhs = f * f.transpose();
  const Eigen::VectorXd x = K.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * n));
  const Eigen::Map<const Eigen::MatrixXd> X(x.data(), n, n);
  Eigen::VectorXd out(g.num_edges());
  for (Index k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edges()[static_cast<std::size_t>(k)];
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    if (const Index i = g.interior_position(e.u); i >= 0) d[i] += 1.0;
    if (const Index j = g.interior_position(e.v); j >= 0) d[j] -= 1.0;
    out[k] = std::sqrt(std::max(0.0, d.dot(X * d)));
  }
  return out;
}

// H_{p,a} f by composite Simpson on [0, T] with P_t stepped by powers of P_h,
// Gamma_p from the defining formula p u (u - v) - u^{2-p} (u^p - v^p).
Eigen::VectorXd simpson_Hpa(const WeightedGraph& g, const Eigen::VectorXd& f, double p, double a, double T, int steps) {
  const double h = T / steps;
  const Eigen::MatrixXd Ph = oracle::heat(g, h);
  auto gamma = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd full = g.extend(u);
    Eigen::VectorXd out(g.num_interior());
    for (Index i = 0; i < g.num_interior(); ++i) {
      const Index x = g.interior_vertex(i);
      double acc = 0.0;
      for (const auto& nb : g.neighbors(x)) {
        const double s = full[x], t = std::max(0.0, full[nb.vertex]);
        const double k = p * s * (s - t) - (s > 0.0 ? std::pow(s, 2.0 - p) * (std::pow(s, p) - std::pow(t, p)) : 0.0);
        acc += nb.mu * k;
      }
      out[i] = acc / g.nu()[x];
    }
    return out;
  };
  Eigen::VectorXd u = f, sum = Eigen::VectorXd::Zero(f.size());
  for (int k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * std::exp(a * k * h) * gamma(u);
    u = Ph * u;
  }
  return (sum * h / 3.0).cwiseMax(0.0).cwiseSqrt();
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("two-vertex examples") {
  const WeightedGraph g = complete_graph(2);
  const auto dec = spectral_decompose(g);
  const Eigen::Vector2d f(1, -1);
  CHECK(lps_H(g, dec, f)[0] == doctest::Approx(1.0));
  CHECK(lps_H(g, dec, f, 2.0)[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(lps_divergence_threshold(g, dec, f) == doctest::Approx(4.0));
  CHECK_THROWS_AS(lps_H(g, dec, f, 4.0), std::domain_error);
  CHECK_THROWS_AS(lps_H(g, dec, f, 5.0), std::domain_error);
  CHECK(lps_divergence_threshold(g, dec, Eigen::Vector2d(3, 3)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("constant functions") {
  const WeightedGraph g = cycle_graph(6);
  const auto dec = spectral_decompose(g);
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(6, 1.7);
  CHECK(lps_H(g, dec, f).cwiseAbs().maxCoeff() == 0.0);
  CHECK(lps_H(g, dec, f, 10.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(lps_Hpa(g, dec, f, 1.5).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("closed form against the Lyapunov oracle and quadrature") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 8; ++trial) {
    const WeightedGraph g = random_graph(4 + trial, 1.5, 1100 + trial, trial % 2 ? 0 : 2);
    const auto dec = spectral_decompose(g);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    const double thr = lps_divergence_threshold(g, dec, f);
    for (double frac : {0.0, 0.5, 0.9}) {
      const double a = frac * thr;
      const Eigen::VectorXd closed = lps_H(g, dec, f, a);
      CHECK(rel_err(closed, lyapunov_H(g, f, a)) < 1e-8);
      CHECK(rel_err(lps_H_quadrature(g, dec, f, a), closed) < 1e-6);
    }
  }
}

TEST_CASE("l2 identity") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const WeightedGraph g = random_graph(5 + trial, 1.2, 1200 + trial, trial % 2);
    const auto dec = spectral_decompose(g);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    // remove the constant part when there is no boundary
    Eigen::VectorXd perp = f;
    if (!g.has_boundary()) perp.array() -= f.dot(g.nu_interior()) / g.nu_interior().sum();
    const double lhs = std::pow(lp_norm_edge(g, lps_H(g, dec, f), 2.0), 2);
    CHECK(lhs == doctest::Approx(0.5 * std::pow(lp_norm_vertex(g, perp, 2.0), 2)).epsilon(1e-10));
  }
}

TEST_CASE("H_{p,a} against Simpson integration") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 3; ++trial) {
    const WeightedGraph g = random_graph(5, 1.0, 1300 + trial, trial == 2 ? 1 : 0);
    const auto dec = spectral_decompose(g);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior()).cwiseAbs();
    const double gap = g.has_boundary() ? dec.lambda(0) : dec.lambda(1);
    const double T = 40.0 / gap;
    for (double p : {1.3, 1.7, 2.0}) {
      const Eigen::VectorXd mine = lps_Hpa(g, dec, f, p, 0.0);
      CHECK(rel_err(mine, simpson_Hpa(g, f, p, 0.0, T, 20000)) < 1e-5);
    }
    CHECK(rel_err(lps_Hpa(g, dec, f, 2.0, 0.5 * gap), lps_H2a_closed(g, dec, f, 0.5 * gap)) < 1e-6);
  }
  CHECK_THROWS(lps_Hpa(path_graph(3), spectral_decompose(path_graph(3)), Eigen::Vector3d(1, -1, 0), 1.5));
}

TEST_CASE("square-function comparison on nonnegative functions") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const WeightedGraph g = random_graph(6 + trial, 1.5, 1400 + trial, trial % 3);
    const auto dec = spectral_decompose(g);
    std::vector<Eigen::VectorXd> samples;
    for (int s = 0; s < 4; ++s) samples.push_back(oracle::random_vector(rng, g.num_interior()));
    for (double p : {1.25, 1.5, 2.0}) {
      const double C = lps_key_constant(g, p);
      for (const auto& s : samples) {
        const Eigen::VectorXd f = s.cwiseAbs();
        const double lhs = lp_norm_edge(g, lps_H(g, dec, f), p);
        const double rhs = lp_norm_vertex(g, g.extend(lps_Hpa(g, dec, f, p)), p);
        CHECK(lhs <= C * rhs * (1 + 1e-8));
      }
      const LpsRatios r = lps_ratios(g, dec, samples, p, 0.0);
      CHECK(r.key_holds);
      CHECK(r.samples == 4);
      CHECK(r.key_ratio <= r.key_constant * (1 + 1e-8));
      CHECK(r.split_ratio >= r.H_ratio * (1 - 1e-12));
    }
  }
  // unit weights on a path: C^p = (p - 1)^{-p/2} * 2 at the middle vertices
  CHECK(std::pow(lps_key_constant(path_graph(5), 1.5), 1.5) == doctest::Approx(std::pow(0.5, -0.75) * 2.0));
}
