#include "doctest.h"
#include "oracles.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/families.hpp"
#include "graphriesz/spectral.hpp"

#include <algorithm>
#include <limits>

using namespace graphriesz;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Jacobi eigensolver against Eigen's symmetric solver") {
  std::mt19937_64 rng(10);
  for (int n : {1, 2, 5, 17, 40}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = oracle::random_vector(rng, 1)[0];
    a = (a + a.transpose()).eval();
    const SymmetricEigen mine = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    Eigen::VectorXd sorted = mine.values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(max_abs(sorted - ref.eigenvalues()) < 1e-12 * std::max(1.0, max_abs(a)));
    CHECK(max_abs(a * mine.vectors - mine.vectors * mine.values.asDiagonal()) < 1e-11 * std::max(1.0, max_abs(a)));
    CHECK(max_abs(mine.vectors.transpose() * mine.vectors - Eigen::MatrixXd::Identity(n, n)) < 1e-13);
  }
  JacobiOptions tight;
  tight.max_sweeps = 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(12, 12);
  CHECK_THROWS_AS(jacobi_eigen(a + a.transpose(), tight), ConvergenceError);
}

TEST_CASE("spectra of small graphs") {
  const auto k2 = spectral_decompose(complete_graph(2));
  CHECK(k2.eigenvalues()[0] == doctest::Approx(0.0));
  CHECK(k2.eigenvalues()[1] == doctest::Approx(2.0));
  CHECK(k2.kernel_dimension() == 1);
  const auto p3 = spectral_decompose(path_graph(3));
  CHECK(p3.eigenvalues()[0] == doctest::Approx(0.0));
  CHECK(p3.eigenvalues()[1] == doctest::Approx(1.0));
  CHECK(p3.eigenvalues()[2] == doctest::Approx(3.0));
  const auto d3 = spectral_decompose(path_graph(3).with_boundary({0, 2}));
  REQUIRE(d3.size() == 1);
  CHECK(d3.eigenvalues()[0] == doctest::Approx(2.0));
  CHECK(d3.kernel_dimension() == 0);
}

TEST_CASE("decomposition against the oracle on random graphs") {
  for (int trial = 0; trial < 15; ++trial) {
    const WeightedGraph g = random_graph(3 + 2 * trial, 1.0 + 0.07 * trial, 500 + trial, trial % 3);
    const auto dec = spectral_decompose(g);
    CHECK(max_abs(dec.eigenvalues() - oracle::eigenvalues(g)) < 1e-11);
    const Eigen::MatrixXd& phi = dec.eigenfunctions();
    CHECK(max_abs(phi.transpose() * g.nu_interior().asDiagonal() * phi -
                  Eigen::MatrixXd::Identity(dec.size(), dec.size())) < 1e-12);
    CHECK(dec.kernel_dimension() == (g.has_boundary() ? 0 : 1));
    // each eigenfunction's first maximal entry is positive
    for (Index k = 0; k < dec.size(); ++k) {
      Index arg;
      phi.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(phi(arg, k) > 0.0);
    }
  }
}

TEST_CASE("heat semigroup") {
  const auto k2 = spectral_decompose(complete_graph(2));
  const Eigen::Vector2d f(1, -1);
  CHECK(max_abs(heat_apply(k2, f, 0.0) - f) < 1e-15);
  CHECK(max_abs(heat_apply(k2, f, 0.7) - std::exp(-1.4) * f) < 1e-14);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(4 + 3 * trial, 1.5, 600 + trial, trial % 2);
    const auto dec = spectral_decompose(g);
    for (double t : {0.01, 0.5, 3.0}) {
      CHECK(max_abs(heat_matrix(dec, t) - oracle::heat(g, t)) < 1e-11);
    }
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    if (!g.has_boundary()) {
      const double mass = f.dot(g.nu_interior());
      for (double t : {0.1, 1.0, 10.0}) CHECK(heat_apply(dec, f, t).dot(g.nu_interior()) == doctest::Approx(mass));
    }
  }
}

TEST_CASE("fractional powers") {
  const auto k2 = spectral_decompose(complete_graph(2));
  const Eigen::Vector2d f(1, -1);
  CHECK(max_abs(frac_power_apply(k2, f, 0.5) - std::sqrt(2.0) * f) < 1e-14);
  CHECK_THROWS_AS(frac_power_apply(k2, Eigen::Vector2d(1, 0), -0.5), std::domain_error);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(5 + trial, 1.2, 700 + trial, trial % 2);
    const auto dec = spectral_decompose(g);
    const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
    const Eigen::VectorXd half = frac_power_apply(dec, f, 0.5);
    CHECK(max_abs(frac_power_apply(dec, half, 0.5) - oracle::laplacian(g) * f) < 1e-10);
    CHECK(std::pow(lp_norm_vertex(g, half, 2.0), 2) == doctest::Approx(oracle::energy(g, f)).epsilon(1e-10));
    CHECK(max_abs(frac_power_matrix(dec, 1.0) - oracle::laplacian(g)) < 1e-10);
  }
}

TEST_CASE("maximal function") {
  const auto k2 = spectral_decompose(complete_graph(2));
  const Eigen::VectorXd star = maximal_function(k2, Eigen::Vector2d(1, 0));
  CHECK(star[0] == doctest::Approx(1.0));
  CHECK(star[1] == doctest::Approx(0.5));
  const auto c = spectral_decompose(cycle_graph(6));
  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(6, 2.5);
  CHECK(max_abs(maximal_function(c, constant) - constant) < 1e-12);
  std::mt19937_64 rng(13);
  const WeightedGraph g = random_graph(15, 1.5, 800, 2);
  const auto dec = spectral_decompose(g);
  const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
  CHECK((maximal_function(dec, f) - f.cwiseAbs()).minCoeff() >= 0.0);
}

TEST_CASE("semigroup operator norms") {
  const auto d3 = spectral_decompose(path_graph(3).with_boundary({0, 2}));
  for (double t : {0.1, 1.0, 2.5}) CHECK(semigroup_pnorm(d3, t, 2.0).norm == doctest::Approx(std::exp(-2.0 * t)));
  const auto c = spectral_decompose(cycle_graph(7));
  CHECK(semigroup_pnorm(c, 1.0, 1.0).norm == doctest::Approx(1.0));
  CHECK(semigroup_pnorm(c, 1.0, kInf).norm == doctest::Approx(1.0));

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(4 + trial, 1.5, 900 + trial, 1 + trial % 3);
    const auto dec = spectral_decompose(g);
    const Eigen::MatrixXd P = oracle::heat(g, 0.8);
    const double n1 = semigroup_pnorm(dec, 0.8, 1.0).norm;
    const double ninf = semigroup_pnorm(dec, 0.8, kInf).norm;
    for (double p : {1.25, 1.5, 3.0}) {
      const SemigroupNorm r = semigroup_pnorm(dec, 0.8, p);
      CHECK_FALSE(r.exact);
      // Riesz-Thorin between the exact endpoint norms
      CHECK(r.norm <= std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p) * (1 + 1e-12));
      CHECK(r.norm <= r.interpolation_bound * (1 + 1e-12));
      double sampled = 0.0;
      for (int s = 0; s < 500; ++s) {
        const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
        sampled = std::max(sampled, lp_norm_vertex(g, P * f, p) / lp_norm_vertex(g, f, p));
      }
      CHECK(r.norm >= sampled * (1 - 1e-9));
      CHECK(r.stated_bound.has_value() == (p <= 2.0));
    }
  }
}

TEST_CASE("Cheeger constant") {
  CHECK(cheeger_exact(cycle_graph(5)).h == 0.0);
  const CheegerResult r = cheeger_exact(path_graph(3).with_boundary({0, 2}));
  CHECK(r.h == doctest::Approx(2.0));
  CHECK(r.boundary_weight == doctest::Approx(2.0));
  CHECK(r.volume == doctest::Approx(1.0));
  CHECK_THROWS(cheeger_exact(path_graph(30), 22));

  // brute force over subsets by plain recomputation
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(4 + trial, 1.5, 1000 + trial, 1 + trial % 2);
    const Index n = g.num_interior();
    double best = kInf;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      double boundary = 0.0, volume = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (!(mask >> i & 1u)) continue;
        const Index x = g.interior_vertex(i);
        volume += g.nu()[x];
        for (const auto& nb : g.neighbors(x)) {
          const Index j = g.interior_position(nb.vertex);
          if (j < 0 || !(mask >> j & 1u)) boundary += nb.mu;
        }
      }
      best = std::min(best, boundary / volume);
    }
    const auto dec = spectral_decompose(g);
    const CheegerResult h = cheeger_exact(g);
    CHECK(h.h == doctest::Approx(best).epsilon(1e-12));
    CHECK(h.boundary_weight / h.volume == doctest::Approx(h.h));
    CHECK(dec.lambda(0) <= h.h * (1 + 1e-12));
    const CheegerBounds b = cheeger_bounds(g, dec);
    CHECK(b.lower == doctest::Approx(dec.lambda(0)));
    CHECK(b.upper.h >= h.h * (1 - 1e-12));
  }
}

TEST_CASE("gap report") {
  const WeightedGraph g = complete_graph(2);
  const GapReport r = gap_report(g, spectral_decompose(g), true);
  CHECK(r.M == doctest::Approx(1.0));
  CHECK(r.kernel_dimension == 1);
  REQUIRE(r.gap_above_zero.has_value());
  CHECK(*r.gap_above_zero == doctest::Approx(2.0));
  REQUIRE(r.cheeger.has_value());
  CHECK(r.cheeger->h == 0.0);
}
