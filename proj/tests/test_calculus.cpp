#include "doctest.h"
#include "oracles.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/families.hpp"

#include <limits>

using namespace graphriesz;

namespace {

WeightedGraph k2() { return complete_graph(2); }

double slack_max(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Laplacian on small graphs") {
  CHECK(slack_max(laplacian_apply(k2(), Eigen::Vector2d(1, 0)), Eigen::Vector2d(1, -1)) == 0.0);
  CHECK(slack_max(laplacian_apply(path_graph(3), Eigen::Vector3d(0, 1, 0)), Eigen::Vector3d(-1, 2, -1)) == 0.0);
}

TEST_CASE("Laplacian matches the edge-list oracle and conserves mass") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = random_graph(5 + trial, 1.0 + 0.05 * trial, 100 + trial, trial % 3);
    const Eigen::MatrixXd L = oracle::laplacian(g);
    CHECK((laplacian_matrix(g) - L).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    CHECK(slack_max(laplacian_apply(g, f), L * f) < 1e-12);
    if (!g.has_boundary()) {
      const double mass = (laplacian_apply(g, f).array() * g.nu_interior().array()).sum();
      CHECK(std::abs(mass) <= 1e-10 * lp_norm_vertex(g, f, 1.0));
    }
  }
}

TEST_CASE("edge difference and vertex gradient") {
  const Eigen::VectorXd d = diff_edge(k2(), Eigen::Vector2d(1, 0));
  CHECK(d[0] == 1.0);
  const Eigen::VectorXd grad = grad_vertex(k2(), Eigen::Vector2d(1, 0));
  CHECK(grad[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(grad[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  const WeightedGraph c = cycle_graph(5);
  CHECK(diff_edge(c, Eigen::VectorXd::Constant(5, 3.0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(grad_vertex(c, Eigen::VectorXd::Constant(5, 3.0)).cwiseAbs().maxCoeff() == 0.0);
  // on a Dirichlet graph the boundary vertex carries a gradient too
  const WeightedGraph p = path_graph(3).with_boundary({0});
  const Eigen::VectorXd gp = grad_vertex(p, Eigen::Vector2d(1, 0));
  CHECK(gp.size() == 3);
  CHECK(gp[0] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("energy identities against the double-sum oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = random_graph(4 + trial, 1.5, 200 + trial, trial % 2);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    const double q = oracle::energy(g, f);
    CHECK(dirichlet_energy(g, f) == doctest::Approx(q).epsilon(1e-12));
    CHECK(std::pow(lp_norm_edge(g, diff_edge(g, f), 2.0), 2) == doctest::Approx(q).epsilon(1e-12));
    CHECK(std::pow(lp_norm_vertex(g, grad_vertex(g, f), 2.0), 2) == doctest::Approx(q).epsilon(1e-12));
    CHECK(inner_product(g, f, laplacian_apply(g, f)) == doctest::Approx(q).epsilon(1e-12));
  }
  CHECK(dirichlet_energy(path_graph(3), Eigen::Vector3d(1, 0, 0)) == 1.0);
  CHECK(dirichlet_energy(cycle_graph(4), Eigen::Vector4d::Constant(2.0)) == 0.0);
}

TEST_CASE("weighted norms") {
  const Eigen::Vector3d nu(1, 3, 1);
  CHECK(weighted_lp_norm(Eigen::Vector3d(0, 1, 0), nu, 2.0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(weighted_lp_norm(Eigen::Vector2d(1, -2), Eigen::Vector2d(1, 1), std::numeric_limits<double>::infinity()) == 2.0);
  const Eigen::Vector3d v(0.3, -1.2, 2.5);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double base = weighted_lp_norm(v, nu, p);
    CHECK(weighted_lp_norm(v, 4.0 * nu, p) == doctest::Approx(std::pow(4.0, 1.0 / p) * base));
    double direct = 0.0;
    for (int i = 0; i < 3; ++i) direct += nu[i] * std::pow(std::abs(v[i]), p);
    CHECK(base == doctest::Approx(std::pow(direct, 1.0 / p)));
  }
  CHECK_THROWS_AS(weighted_lp_norm(v, nu, 0.5), std::invalid_argument);
}

TEST_CASE("scalar kernel gamma_p") {
  for (double p : {1.1, 1.5, 1.9, 2.0}) {
    CHECK(gamma_p(0.7, 0.7, p) == doctest::Approx(0.0));
    CHECK(gamma_p(0.0, 2.0, p) == (p < 2.0 ? 0.0 : 4.0));
    CHECK(gamma_p(2.0, 0.0, p) == doctest::Approx((p - 1.0) * 4.0));
  }
  CHECK(gamma_p(3.0, 1.0, 2.0) == 4.0);
  // defining formula p a (a - b) - a^{2-p} (a^p - b^p)
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int s = 0; s < 2000; ++s) {
    const double a = u(rng), b = u(rng), p = 1.0 + u(rng) / 10.0;
    const double direct = p * a * (a - b) - std::pow(a, 2.0 - p) * (std::pow(a, p) - std::pow(b, p));
    CHECK(gamma_p(a, b, p) == doctest::Approx(direct).epsilon(1e-9).scale(a * a + b * b));
  }
  CHECK_THROWS_AS(gamma_p(-1.0, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(gamma_p(1.0, 1.0, 2.5), std::domain_error);
}

TEST_CASE("gamma_p sandwich and integral form") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (double p : {1.1, 1.5, 2.0}) {
    for (int s = 0; s < 2000; ++s) {
      const double a = u(rng), b = u(rng);
      const double sym = gamma_p(a, b, p) + gamma_p(b, a, p);
      CHECK(sym - (p - 1.0) * (a - b) * (a - b) >= -1e-12);
      CHECK(p * (a - b) * (a - b) - sym >= -1e-12);
      // single direction is bounded by (p-1)(a-b)^2
      CHECK(gamma_p(a, b, p) <= (p - 1.0) * (a - b) * (a - b) + 1e-12);
    }
    for (int s = 0; s < 200; ++s) {
      const double a = u(rng), b = u(rng);
      CHECK(gamma_p_integral_form(a, b, p) == doctest::Approx(gamma_p(a, b, p)).epsilon(1e-8));
    }
  }
}

TEST_CASE("pseudo-gradient") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(6 + trial, 2.0, 300 + trial, trial % 2);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior()).cwiseAbs();
    const Eigen::VectorXd grad2 = g.restrict(grad_vertex(g, f)).array().square();
    CHECK(slack_max(pseudo_gradient(g, f, 2.0), 2.0 * grad2) <= 1e-10 * std::max(1.0, grad2.maxCoeff()));
    for (double p : {1.25, 1.5, 1.75}) {
      const Eigen::VectorXd gamma = pseudo_gradient(g, f, p);
      CHECK(slack_max(gamma, pseudo_gradient_direct(g, f, p)) <= 1e-9 * std::max(1.0, gamma.maxCoeff()));
      CHECK(gamma.minCoeff() >= -1e-12);
      CHECK((2.0 * (p - 1.0) * grad2 - gamma).minCoeff() >= -1e-12);
    }
  }
  // zero vertex next to a positive one
  const Eigen::Vector3d f(0.0, 1.0, 2.0);
  CHECK(pseudo_gradient(path_graph(3), f, 1.5)[0] == 0.0);
  CHECK(grad_vertex(path_graph(3), f)[0] > 0.0);
  CHECK_THROWS(pseudo_gradient(path_graph(3), Eigen::Vector3d(-1, 0, 1), 1.5));
}

TEST_CASE("Dirac-mass sides") {
  // d-regular normalized graph at p = 2: lhs = (2d)^2, rhs factor = d (d + 1)
  for (Index n : {4, 6, 9}) {
    const WeightedGraph g = cycle_graph(n, Measure::Degree);
    const MipSides s = char_mip_sides(g, 0, 2.0);
    CHECK(s.lhs == doctest::Approx(16.0));
    CHECK(s.rhs_factor == doctest::Approx(6.0));
    CHECK(s.cross_checked);
    CHECK(s.direct_lhs == doctest::Approx(s.lhs));
    CHECK(s.direct_rhs == doctest::Approx(s.rhs_factor));
  }
  const WeightedGraph k = complete_graph(5, Measure::Degree);
  const MipSides s = char_mip_sides(k, 2, 2.0);
  CHECK(s.lhs / s.rhs_factor == doctest::Approx(4.0 * 4.0 / 5.0));
}

TEST_CASE("explicit operator bounds") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = random_graph(5 + trial, 1.0 + 0.1 * (trial % 5), 400 + trial, trial % 2);
    const double M = bl_constant(g);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double df = std::pow(lp_norm_edge(g, diff_edge(g, f), p), p);
      CHECK(df <= std::pow(2.0, p) * M * std::pow(lp_norm_vertex(g, f, p), p) * (1 + 1e-12));
      CHECK(std::pow(lp_norm_vertex(g, laplacian_apply(g, f), p), p) <= 2.0 * std::pow(M, p - 1.0) * df * (1 + 1e-12));
    }
  }
}
