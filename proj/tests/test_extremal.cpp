#include "doctest.h"
#include "oracles.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/extremal.hpp"
#include "graphriesz/families.hpp"

using namespace graphriesz;

namespace {

Budget small_budget() {
  Budget b;
  b.restarts = 8;
  return b;
}

}  // namespace

TEST_CASE("ratio_eval on closed-form cases") {
  const WeightedGraph k2 = complete_graph(2);
  const auto dec = spectral_decompose(k2);
  const Eigen::Vector2d f(1, -1);
  // Df = 2 on the edge, Delta f = 2 f, Delta^{1/2} f = sqrt 2 f
  CHECK(ratio_eval(k2, dec, riesz_edge(2.0), f) == doctest::Approx(1.0));
  CHECK(ratio_eval(k2, dec, mip(2.0), f) == doctest::Approx(1.0));
  CHECK(ratio_eval(k2, dec, gp(2.0, 0.5), f) == doctest::Approx(std::sqrt(0.5) * 2.0 * std::exp(-1.0) / std::sqrt(2.0)));
  CHECK_THROWS_AS(ratio_eval(k2, dec, riesz_edge(2.0), Eigen::Vector2d(1, 1)), ExcludedSubspace);
  CHECK_THROWS_AS(ratio_eval(k2, dec, mip(1.5), Eigen::Vector2d(2, 2)), ExcludedSubspace);
}

TEST_CASE("p = 2 identities on random graphs") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph g = random_graph(5 + trial, 1.5, 1500 + trial, trial % 2);
    const auto dec = spectral_decompose(g);
    for (int s = 0; s < 5; ++s) {
      const Eigen::VectorXd f = oracle::random_vector(rng, g.num_interior());
      CHECK(ratio_eval(g, dec, riesz_edge(2.0), f) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ratio_eval(g, dec, riesz_vertex(2.0), f) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(ratio_eval(g, dec, mip(2.0), f) <= 1.0 + 1e-12);
      // 0-homogeneity
      for (const auto& F : {riesz_edge(1.5), mip(3.0), gp(1.5, 0.7)}) {
        CHECK(ratio_eval(g, dec, F, -3.5 * f) == doctest::Approx(ratio_eval(g, dec, F, f)).epsilon(1e-12));
      }
    }
  }
  // MI equality on an eigenfunction
  const WeightedGraph c = cycle_graph(8);
  const auto dec = spectral_decompose(c);
  CHECK(ratio_eval(c, dec, mip(2.0), dec.eigenfunctions().col(3)) == doctest::Approx(1.0));
}

TEST_CASE("constraints") {
  const WeightedGraph g = path_graph(4);
  const Eigen::Vector4d f(1, -2, 3, 0);
  CHECK(apply_constraint(g, Constraint::NonNegative, f) == f.cwiseAbs());
  const Eigen::VectorXd m = apply_constraint(g, Constraint::MeanZero, f);
  CHECK(m.dot(g.nu_interior()) == doctest::Approx(0.0).scale(1.0));
  const WeightedGraph d = path_graph(4).with_boundary({0});
  const auto dec = spectral_decompose(d);
  CHECK_THROWS(maximize_ratio(d, dec, norm_equiv(Quantity::Function, Quantity::EdgeGradient, 2.0, Constraint::MeanZero),
                              small_budget(), 1));
}

TEST_CASE("maximizer matches a brute-force sphere search") {
  std::vector<WeightedGraph> graphs = {
      path_graph(3),
      complete_graph(3, Measure::Degree),
      path_graph(5).with_boundary({0, 4}),
      random_graph(5, 1.5, 77, 2),
  };
  for (const auto& g : graphs) {
    REQUIRE(g.num_interior() <= 3);
    const auto dec = spectral_decompose(g);
    std::vector<RatioFunctional> fs = {riesz_edge(1.5), reverse_riesz(3.0), mip(1.5), mip_vertex(3.0), gp(1.5, 0.5)};
    if (g.has_boundary()) fs.push_back(sobolev(1.5));
    else fs.push_back(norm_equiv(Quantity::MeanZeroPart, Quantity::VertexGradient, 3.0, Constraint::MeanZero));
    for (const auto& F : fs) {
      CAPTURE(F.name);
      CAPTURE(g.num_vertices());
      const ExtremalEstimate est = maximize_ratio(g, dec, F, small_budget(), 5);
      const double ref = oracle::sphere_search(g, dec, F, 0.02);
      CHECK(est.witness_consistent);
      CHECK(est.best_ratio == doctest::Approx(ref).epsilon(1e-3));
    }
  }
}

TEST_CASE("searches are deterministic in the seed") {
  const WeightedGraph g = random_graph(12, 1.5, 88, 2);
  const auto dec = spectral_decompose(g);
  const ExtremalEstimate a = maximize_ratio(g, dec, riesz_edge(1.5), small_budget(), 99);
  const ExtremalEstimate b = maximize_ratio(g, dec, riesz_edge(1.5), small_budget(), 99);
  CHECK(a.best_ratio == b.best_ratio);
  CHECK(a.witness == b.witness);
  CHECK(a.sweeps == b.sweeps);
  CHECK(a.restarts == 8);
  CHECK(a.converged_restarts <= a.restarts);
  CHECK(a.best_ratio == doctest::Approx(ratio_eval(g, dec, riesz_edge(1.5), a.witness)).epsilon(1e-9));

  const nlohmann::json j = to_json(g, a);
  CHECK(j.at("functional") == a.functional);
  CHECK(j.at("seed") == 99);
  CHECK(j.at("witness").size() == static_cast<std::size_t>(g.num_interior()));
  CHECK(j.at("witness_vertices").size() == j.at("witness").size());
}

TEST_CASE("p = 2 maximizers hit the exact values") {
  const WeightedGraph g = random_graph(10, 1.5, 91, 0);
  const auto dec = spectral_decompose(g);
  CHECK(maximize_ratio(g, dec, riesz_edge(2.0), small_budget(), 3).best_ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(maximize_ratio(g, dec, mip(2.0), small_budget(), 3).best_ratio == doctest::Approx(1.0).epsilon(1e-6));
  // sup_f ||f|| / ||Df|| = lambda_0^{-1/2} with a boundary
  const WeightedGraph d = random_graph(10, 1.5, 92, 2);
  const auto dd = spectral_decompose(d);
  CHECK(maximize_ratio(d, dd, sobolev(2.0), small_budget(), 3).best_ratio ==
        doctest::Approx(1.0 / std::sqrt(dd.lambda(0))).epsilon(1e-6));
}
