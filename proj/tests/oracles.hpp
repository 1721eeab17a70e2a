#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's operators; graphs are read only through their edge lists.

#include "graphriesz/extremal.hpp"
#include "graphriesz/graph.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

using graphriesz::Index;
using graphriesz::WeightedGraph;

// Full-vertex Laplacian (Delta f)(x) = (1/nu_x) sum_y mu_xy (f(x) - f(y)),
// restricted to the interior block.
inline Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  const Index N = g.num_vertices();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(N, N);
  for (const auto& e : g.edges()) {
    full(e.u, e.u) += e.mu / g.nu()[e.u];
    full(e.v, e.v) += e.mu / g.nu()[e.v];
    full(e.u, e.v) -= e.mu / g.nu()[e.u];
    full(e.v, e.u) -= e.mu / g.nu()[e.v];
  }
  const Index n = g.num_interior();
  Eigen::MatrixXd L(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) L(i, j) = full(g.interior_vertex(i), g.interior_vertex(j));
  return L;
}

// Eigenvalues of Delta through Eigen's symmetric solver on N^{1/2} L N^{-1/2}.
inline Eigen::VectorXd eigenvalues(const WeightedGraph& g) {
  const Eigen::VectorXd s = g.nu_interior().cwiseSqrt();
  const Eigen::MatrixXd S = s.asDiagonal() * laplacian(g) * s.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  return es.eigenvalues();
}

// e^{-t Delta} by Eigen's matrix exponential (Pade with scaling and squaring).
inline Eigen::MatrixXd heat(const WeightedGraph& g, double t) {
  const Eigen::MatrixXd A = -t * laplacian(g);
  return A.exp();
}

// Q(f) from the double sum 1/2 sum_{x,y} mu_xy (f(x) - f(y))^2.
inline double energy(const WeightedGraph& g, const Eigen::VectorXd& f) {
  const Eigen::VectorXd full = g.extend(f);
  double acc = 0.0;
  for (Index x = 0; x < g.num_vertices(); ++x)
    for (const auto& nb : g.neighbors(x)) acc += 0.5 * nb.mu * std::pow(full[x] - full[nb.vertex], 2);
  return acc;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// Brute-force maximum of a 0-homogeneous ratio over the unit sphere of R^n
// for n <= 3: a grid at `step` radians, then a finer grid around the best
// point. Points outside the constraint set are projected or skipped.
inline double sphere_search(const WeightedGraph& g, const graphriesz::SpectralDecomposition& dec,
                            const graphriesz::RatioFunctional& F, double step = 0.01) {
  using graphriesz::Constraint;
  const Index n = g.num_interior();
  auto eval = [&](Eigen::VectorXd f) {
    if (F.constraint == Constraint::NonNegative && f.minCoeff() < 0.0) return -1.0;
    if (F.constraint == Constraint::MeanZero) f = graphriesz::apply_constraint(g, Constraint::MeanZero, f);
    try {
      return graphriesz::ratio_eval(g, dec, F, f);
    } catch (const graphriesz::ExcludedSubspace&) {
      return -1.0;
    }
  };
  auto point = [&](double a, double b) {
    Eigen::VectorXd f(n);
    if (n == 1) f << 1.0;
    if (n == 2) f << std::cos(a), std::sin(a);
    if (n == 3) f << std::sin(b) * std::cos(a), std::sin(b) * std::sin(a), std::cos(b);
    return f;
  };
  const double pi = std::numbers::pi;
  double best = -1.0, ba = 0.0, bb = 0.0;
  auto scan = [&](double a0, double a1, double b0, double b1, double h) {
    for (double a = a0; a <= a1; a += h) {
      for (double b = b0; b <= b1; b += h) {
        const double v = eval(point(a, b));
        if (v > best) {
          best = v;
          ba = a;
          bb = b;
        }
        if (n < 3) break;
      }
      if (n == 1) break;
    }
  };
  if (n == 1) return std::max(eval(point(0, 0)), eval(-point(0, 0)));
  scan(0.0, 2.0 * pi, 0.0, pi, step);
  for (int level = 0; level < 3; ++level) {
    const double h = step / std::pow(20.0, level + 1);
    const double ca = ba, cb = bb;
    scan(ca - 20.0 * h, ca + 20.0 * h, cb - 20.0 * h, cb + 20.0 * h, h);
  }
  return best;
}

}  // namespace oracle
