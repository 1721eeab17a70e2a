#include "graphriesz/suites.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/counterexamples.hpp"
#include "graphriesz/families.hpp"
#include "graphriesz/littlewood_paley.hpp"
#include "graphriesz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace graphriesz {

using nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "semigroup", "lps",    "mip",           "riesz",
                                              "thm13",    "thm14",     "counterexamples"};
  return names;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Builder {
  SuiteReport& report;
  const std::string prefix;

  void add(const std::string& id, const std::string& anchor, Status status, double tol, json params, json values) {
    report.checks.push_back({prefix + id, anchor, std::move(params), std::move(values), status, tol});
  }
  void pass_if(const std::string& id, const std::string& anchor, bool ok, double tol, json params, json values) {
    add(id, anchor, ok ? Status::Pass : Status::Fail, tol, std::move(params), std::move(values));
  }
  // Runs body; an exception becomes a failed record under `id`.
  void guard(const std::string& id, const std::string& anchor, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(id, anchor, Status::Fail, 0.0, json::object(), {{"error", e.what()}});
    }
  }
};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

Eigen::VectorXd normal_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

struct NamedGraph {
  std::string name;
  WeightedGraph graph;
};

// Seeded random graphs with sizes in [lo, hi]; every other one carries a
// Dirichlet set when `mixed`, all do when `boundary`.
std::vector<NamedGraph> random_family(const SuiteConfig& cfg, int count, Index lo, Index hi, bool boundary,
                                      bool mixed, std::uint64_t tag) {
  if (cfg.graph) return {{"user", *cfg.graph}};
  std::vector<NamedGraph> out;
  auto rng = stream(cfg.seed, tag);
  std::uniform_int_distribution<Index> size(lo, hi);
  const double targets[] = {1.0, 1.5, 2.0};
  for (int i = 0; i < count; ++i) {
    const Index n = size(rng);
    const bool with_boundary = boundary || (mixed && i % 2 == 1);
    const Index b = with_boundary ? std::max<Index>(1, n / 5) : 0;
    const std::uint64_t s = rng();
    out.push_back({"random(n=" + std::to_string(n) + ",b=" + std::to_string(b) + ",seed=" + std::to_string(s) + ")",
                   random_graph(n, targets[i % 3], s, b)});
  }
  return out;
}

std::vector<double> exponents(const SuiteConfig& cfg, std::vector<double> defaults) {
  if (cfg.p) return {*cfg.p};
  return defaults;
}

// gamma_p and Gamma_p are defined for p in (1, 2]; an override outside that
// range leaves these checks out.
std::vector<double> gamma_exponents(const SuiteConfig& cfg, std::vector<double> defaults) {
  if (cfg.p) return *cfg.p > 1.0 && *cfg.p <= 2.0 ? std::vector<double>{*cfg.p} : std::vector<double>{};
  return defaults;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

double ppow(double v, double p) { return std::pow(v, p); }

// ---------------------------------------------------------------------------

void calculus_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 20, 3, 40, false, true, 1);
  auto rng = stream(cfg.seed, 2);

  b.guard("laplacian_conservation", "sum of Delta f against nu vanishes", [&] {
    double worst = 0.0;
    int tested = 0;
    for (const auto& [name, g] : graphs) {
      if (g.has_boundary()) continue;
      for (int s = 0; s < 5; ++s) {
        const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
        const double mass = (laplacian_apply(g, f).array() * g.nu_interior().array()).sum();
        worst = std::max(worst, std::abs(mass) / lp_norm_vertex(g, f, 1.0));
        ++tested;
      }
    }
    if (tested == 0) b.add("laplacian_conservation", "sum of Delta f against nu vanishes", Status::Report, cfg.tol, {}, {{"applicable", false}});
    else b.pass_if("laplacian_conservation", "sum of Delta f against nu vanishes", worst <= cfg.tol, cfg.tol, {{"samples", tested}}, {{"max_relative_mass", worst}});
  });

  b.guard("energy_identities", "||Df||_2^2 = Q(f) = <f, Delta f> = ||Delta^{1/2} f||_2^2", [&] {
    double worst = 0.0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      for (int s = 0; s < 5; ++s) {
        const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
        const double e1 = ppow(lp_norm_edge(g, diff_edge(g, f), 2.0), 2.0);
        const double q = dirichlet_energy(g, f);
        const double ip = inner_product(g, f, laplacian_apply(g, f));
        const double half = ppow(lp_norm_vertex(g, frac_power_apply(dec, f, 0.5), 2.0), 2.0);
        const double grad = ppow(lp_norm_vertex(g, grad_vertex(g, f), 2.0), 2.0);
        worst = std::max({worst, rel(e1, q), rel(ip, q), rel(half, q), rel(grad, q)});
      }
    }
    b.pass_if("energy_identities", "||Df||_2^2 = Q(f) = <f, Delta f> = ||Delta^{1/2} f||_2^2", worst <= 1e-9, 1e-9,
              {{"graphs", graphs.size()}}, {{"max_relative_error", worst}});
  });

  b.guard("pseudo_gradient_p2", "Gamma_2(f) = 2 |grad f|^2", [&] {
    double worst = 0.0;
    for (const auto& [name, g] : graphs) {
      const Eigen::VectorXd f = normal_vector(rng, g.num_interior()).cwiseAbs();
      const Eigen::VectorXd gamma = pseudo_gradient(g, f, 2.0);
      const Eigen::VectorXd grad2 = g.restrict(grad_vertex(g, f)).array().square() * 2.0;
      worst = std::max(worst, (gamma - grad2).cwiseAbs().maxCoeff() / std::max(1.0, grad2.maxCoeff()));
    }
    b.pass_if("pseudo_gradient_p2", "Gamma_2(f) = 2 |grad f|^2", worst <= cfg.tol, cfg.tol, {}, {{"max_error", worst}});
  });

  for (double p : gamma_exponents(cfg, {1.1, 1.5, 2.0})) {
    b.guard("gamma_sandwich", "(p-1)(a-b)^2 <= gamma_p(a,b) + gamma_p(b,a) <= p(a-b)^2", [&] {
      std::uniform_real_distribution<double> u(0.0, 10.0);
      double lower = kInf, upper = kInf;
      for (int s = 0; s < 10000; ++s) {
        const double a = u(rng), c = u(rng);
        const double sym = gamma_p(a, c, p) + gamma_p(c, a, p);
        lower = std::min(lower, sym - (p - 1.0) * (a - c) * (a - c));
        upper = std::min(upper, p * (a - c) * (a - c) - sym);
      }
      b.pass_if("gamma_sandwich", "(p-1)(a-b)^2 <= gamma_p(a,b) + gamma_p(b,a) <= p(a-b)^2",
                lower >= -1e-12 && upper >= -1e-12, 1e-12, {{"p", p}, {"samples", 10000}},
                {{"min_lower_slack", lower}, {"min_upper_slack", upper}});
    });
    b.guard("gamma_integral_form", "gamma_p as p(p-1)(a-b)^2 int_0^1 (1-u) a^{2-p} / ((1-u)a + ub)^{2-p} du", [&] {
      std::uniform_real_distribution<double> u(0.0, 10.0);
      double worst = 0.0;
      for (int s = 0; s < 300; ++s) {
        const double a = u(rng), c = u(rng);
        const double closed = gamma_p(a, c, p);
        const double integral = gamma_p_integral_form(a, c, p);
        worst = std::max(worst, std::abs(closed - integral) / std::max(std::abs(closed), 1e-300));
      }
      b.pass_if("gamma_integral_form", "gamma_p as p(p-1)(a-b)^2 int_0^1 (1-u) a^{2-p} / ((1-u)a + ub)^{2-p} du",
                worst <= 1e-8, 1e-8, {{"p", p}, {"samples", 300}}, {{"max_relative_error", worst}});
    });
  }

  // With |grad f|^2 = (1/(2 nu)) sum mu (df)^2 one has gamma_p(a, b) <= (p-1)(a-b)^2, hence
  // Gamma_p <= 2(p-1)|grad f|^2; the constant p-1 belongs to the unhalved gradient.
  for (double p : gamma_exponents(cfg, {1.25, 1.5, 2.0})) {
    b.guard("pseudo_gradient_bounds", "0 <= Gamma_p(f) <= 2(p-1) |grad f|^2 for f >= 0", [&] {
      double low = kInf, high = kInf, stated = 0.0;
      int violations = 0, samples = 0;
      for (const auto& [name, g] : graphs) {
        const Eigen::VectorXd f = normal_vector(rng, g.num_interior()).cwiseAbs();
        const Eigen::VectorXd gamma = pseudo_gradient(g, f, p);
        const Eigen::VectorXd grad2 = g.restrict(grad_vertex(g, f)).array().square();
        const double scale = std::max(1.0, grad2.maxCoeff());
        low = std::min(low, gamma.minCoeff() / scale);
        high = std::min(high, (2.0 * (p - 1.0) * grad2 - gamma).minCoeff() / scale);
        for (Index i = 0; i < gamma.size(); ++i) {
          ++samples;
          if (gamma[i] > (p - 1.0) * grad2[i] * (1.0 + 1e-12)) ++violations;
          if (grad2[i] > 0.0) stated = std::max(stated, gamma[i] / ((p - 1.0) * grad2[i]));
        }
      }
      b.pass_if("pseudo_gradient_bounds", "0 <= Gamma_p(f) <= 2(p-1) |grad f|^2 for f >= 0",
                low >= -1e-12 && high >= -1e-12, 1e-12, {{"p", p}}, {{"min_lower_slack", low}, {"min_upper_slack", high}});
      b.add("pseudo_gradient_bound_stated", "0 <= Gamma_p(f) <= (p-1) |grad f|^2 for f >= 0", Status::Report, 0.0,
            {{"p", p}}, {{"vertices", samples}, {"violations", violations}, {"max_gamma_over_bound", stated}});
    });
  }

  b.guard("pseudo_gradient_zero_vertex", "f(x) = 0 < f(y): Gamma_p(f)(x) = 0 while |grad f|^2(x) > 0", [&] {
    const WeightedGraph g = path_graph(3);
    const Eigen::Vector3d f(0.0, 1.0, 2.0);
    const double gamma = pseudo_gradient(g, f, 1.5)[0];
    const double grad = grad_vertex(g, f)[0];
    b.pass_if("pseudo_gradient_zero_vertex", "f(x) = 0 < f(y): Gamma_p(f)(x) = 0 while |grad f|^2(x) > 0",
              gamma == 0.0 && grad > 0.0, 0.0, {{"p", 1.5}}, {{"gamma", gamma}, {"grad_squared", grad * grad}});
  });

  for (double p : exponents(cfg, {1.0, 1.5, 2.0, 3.0})) {
    b.guard("operator_bounds", "||Df||_p^p <= 2^p M ||f||_p^p and ||Delta f||_p^p <= 2 M^{p-1} ||Df||_p^p", [&] {
      double edge = 0.0, lap = 0.0, edge_best = 0.0, lap_best = 0.0;
      for (const auto& [name, g] : graphs) {
        const double M = bl_constant(g);
        for (int s = 0; s < 5; ++s) {
          const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
          const double df = ppow(lp_norm_edge(g, diff_edge(g, f), p), p);
          const double nf = ppow(lp_norm_vertex(g, f, p), p);
          const double lf = ppow(lp_norm_vertex(g, laplacian_apply(g, f), p), p);
          edge = std::max(edge, df / (std::pow(2.0, p) * M * nf));
          lap = std::max(lap, lf / (2.0 * std::pow(M, p - 1.0) * df));
          edge_best = std::max(edge_best, df / (M * nf));
          lap_best = std::max(lap_best, lf / (std::pow(M, p - 1.0) * df));
        }
      }
      b.pass_if("operator_bounds", "||Df||_p^p <= 2^p M ||f||_p^p and ||Delta f||_p^p <= 2 M^{p-1} ||Df||_p^p",
                edge <= 1.0 + cfg.tol && lap <= 1.0 + cfg.tol, cfg.tol, {{"p", p}},
                {{"max_edge_bound_ratio", edge},
                 {"max_laplacian_bound_ratio", lap},
                 {"measured_edge_constant", edge_best},
                 {"measured_laplacian_constant", lap_best}});
    });
  }

  for (double p : exponents(cfg, {1.25, 1.5, 2.0, 3.0, 4.0})) {
    b.guard("gradient_norm_comparison", "||Df||_p vs || |grad f| ||_p with constants (M/2)^{|1-p/2|}", [&] {
      double worst = 0.0;
      for (const auto& [name, g] : graphs) {
        const double M = bl_constant(g);
        for (int s = 0; s < 5; ++s) {
          const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
          const double df = ppow(lp_norm_edge(g, diff_edge(g, f), p), p);
          const double gf = ppow(lp_norm_vertex(g, grad_vertex(g, f), p), p);
          // p <= 2: ||Df||^p <= (M/2)^{1-p/2} ||grad f||^p ; p >= 2: ||grad f||^p <= (M/2)^{p/2-1} ||Df||^p
          const double r = p <= 2.0 ? df / (std::pow(M / 2.0, 1.0 - p / 2.0) * gf)
                                    : gf / (std::pow(M / 2.0, p / 2.0 - 1.0) * df);
          worst = std::max(worst, r);
        }
      }
      b.pass_if("gradient_norm_comparison", "||Df||_p vs || |grad f| ||_p with constants (M/2)^{|1-p/2|}",
                worst <= 1.0 + cfg.tol, cfg.tol, {{"p", p}}, {{"max_bound_ratio", worst}});
    });
  }

  for (double p : exponents(cfg, {1.25, 1.5, 2.0, 3.0})) {
    b.guard("local_uniform_equivalence", "two-sided gradient norm equivalence under inf mu_xy/deg_x >= delta", [&] {
      // normalized cycles and paths share delta = 1/2
      const double delta = 0.5;
      double worst = 0.0, up = 0.0, down = 0.0;
      for (Index n = 5; n <= 40; n += 5) {
        for (const WeightedGraph& g : {cycle_graph(n, Measure::Degree), path_graph(n, Measure::Degree)}) {
          for (int s = 0; s < 3; ++s) {
            const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
            const double df = ppow(lp_norm_edge(g, diff_edge(g, f), p), p);
            const double gf = ppow(lp_norm_vertex(g, grad_vertex(g, f), p), p);
            up = std::max(up, gf / df);
            down = std::max(down, df / gf);
            const double r = p <= 2.0 ? gf / (std::pow(delta / 2.0, p / 2.0 - 1.0) * df)
                                      : df / (std::pow(delta / 2.0, 1.0 - p / 2.0) * gf);
            worst = std::max(worst, r);
          }
        }
      }
      b.pass_if("local_uniform_equivalence", "two-sided gradient norm equivalence under inf mu_xy/deg_x >= delta",
                worst <= 1.0 + cfg.tol, cfg.tol, {{"p", p}, {"delta", delta}},
                {{"max_bound_ratio", worst}, {"sup_grad_over_edge", up}, {"sup_edge_over_grad", down}});
    });
  }

  b.guard("cauchy_schwarz_mi2", "||Df||_2^2 <= ||f||_2 ||Delta f||_2", [&] {
    double worst = 0.0;
    for (const auto& [name, g] : graphs) {
      const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
      const double df = ppow(lp_norm_edge(g, diff_edge(g, f), 2.0), 2.0);
      worst = std::max(worst, df / (lp_norm_vertex(g, f, 2.0) * lp_norm_vertex(g, laplacian_apply(g, f), 2.0)));
    }
    b.pass_if("cauchy_schwarz_mi2", "||Df||_2^2 <= ||f||_2 ||Delta f||_2", worst <= 1.0 + cfg.tol, cfg.tol, {},
              {{"max_ratio", worst}});
  });

  b.guard("char_mip_regular", "Dirac-mass sides on d-regular normalized graphs at p = 2", [&] {
    double worst = 0.0;
    json rows = json::array();
    for (const WeightedGraph& g : {cycle_graph(6, Measure::Degree), complete_graph(5, Measure::Degree)}) {
      const double d = g.degree()[0];
      const MipSides s = char_mip_sides(g, 0, 2.0);
      // lhs = (d + d)^2, rhs = d (d + d * d^{-1}) = d (d + 1)
      worst = std::max({worst, rel(s.lhs, 4.0 * d * d), rel(s.rhs_factor, d * (d + 1.0)),
                        rel(s.direct_lhs, s.lhs), rel(s.direct_rhs, s.rhs_factor)});
      rows.push_back({{"d", d}, {"lhs", s.lhs}, {"rhs_factor", s.rhs_factor}, {"ratio", s.lhs / s.rhs_factor}});
    }
    b.pass_if("char_mip_regular", "Dirac-mass sides on d-regular normalized graphs at p = 2", worst <= cfg.tol, cfg.tol,
              {{"p", 2.0}}, {{"rows", rows}, {"max_relative_error", worst}});
  });
}

// ---------------------------------------------------------------------------

void semigroup_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 20, 3, 30, false, true, 11);
  auto rng = stream(cfg.seed, 12);
  double orth = 0.0, resid = 0.0, semigroup = 0.0, positivity = 0.0, mass = 0.0, contraction = 0.0;
  double sq = 0.0, energy = 0.0, inverse = 0.0, maximal_low = kInf;
  bool kernel_ok = true;
  json maximal_rows = json::array();
  const std::vector<double> ts{0.1, cfg.t, 10.0};
  b.guard("decomposition", "nu-orthonormal eigenpairs of Delta", [&] {
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      const Eigen::MatrixXd& phi = dec.eigenfunctions();
      const Eigen::MatrixXd gram = phi.transpose() * g.nu_interior().asDiagonal() * phi;
      orth = std::max(orth, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
      for (Index k = 0; k < dec.size(); ++k) {
        const Eigen::VectorXd r = laplacian_apply(g, Eigen::VectorXd(phi.col(k))) - dec.eigenvalues()[k] * phi.col(k);
        resid = std::max(resid, r.cwiseAbs().maxCoeff() / (1.0 + dec.eigenvalues()[k]));
      }
      if (g.has_boundary()) {
        kernel_ok = kernel_ok && dec.kernel_dimension() == 0 && dec.eigenvalues()[0] > 0.0;
      } else {
        const Eigen::VectorXd phi0 = phi.col(0);
        kernel_ok = kernel_ok && dec.kernel_dimension() == 1 && (phi0.array() - phi0[0]).abs().maxCoeff() <= 1e-10;
      }
      for (int s = 0; s < 3; ++s) {
        const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
        const Eigen::VectorXd pos = f.cwiseAbs();
        for (double t : ts) {
          const Eigen::VectorXd u = heat_apply(dec, f, t);
          const Eigen::VectorXd twice = heat_apply(dec, heat_apply(dec, f, 0.5 * t), 0.5 * t);
          semigroup = std::max(semigroup, (u - twice).cwiseAbs().maxCoeff() / f.cwiseAbs().maxCoeff());
          positivity = std::min(positivity, heat_apply(dec, pos, t).minCoeff());
          for (double p : {1.0, 2.0, kInf})
            contraction = std::max(contraction, lp_norm_vertex(g, u, p) / lp_norm_vertex(g, f, p));
          if (!g.has_boundary())
            mass = std::max(mass, std::abs((u - f).dot(g.nu_interior())) / lp_norm_vertex(g, f, 1.0));
        }
        const Eigen::VectorXd lf = laplacian_apply(g, f);
        const Eigen::VectorXd half = frac_power_apply(dec, f, 0.5);
        sq = std::max(sq, (frac_power_apply(dec, half, 0.5) - lf).cwiseAbs().maxCoeff() /
                              std::max(1.0, lf.cwiseAbs().maxCoeff()));
        energy = std::max(energy, rel(ppow(lp_norm_vertex(g, half, 2.0), 2.0), dirichlet_energy(g, f)));
        const Eigen::VectorXd centered = f - dec.kernel_projection(f);
        inverse = std::max(inverse, (frac_power_apply(dec, half, -0.5) - centered).cwiseAbs().maxCoeff() /
                                        std::max(1.0, f.cwiseAbs().maxCoeff()));
        const Eigen::VectorXd fstar = maximal_function(dec, f);
        maximal_low = std::min(maximal_low, (fstar - f.cwiseAbs()).minCoeff());
      }
    }
    b.pass_if("eigen_orthonormality", "nu-orthonormal eigenpairs of Delta", orth <= 1e-10, 1e-10, {}, {{"max_error", orth}});
    b.pass_if("eigen_residual", "Delta phi_k = lambda_k phi_k", resid <= 1e-9, 1e-9, {}, {{"max_scaled_residual", resid}});
    b.pass_if("kernel_structure", "kernel is the constants without boundary, trivial with boundary", kernel_ok, 1e-10, {}, {});
    b.pass_if("semigroup_property", "e^{-s Delta} e^{-t Delta} = e^{-(s+t) Delta}", semigroup <= 1e-9, 1e-9, {}, {{"max_error", semigroup}});
    b.pass_if("contraction", "||e^{-t Delta} f||_p <= ||f||_p for p in {1, 2, inf}", contraction <= 1.0 + cfg.tol, cfg.tol, {}, {{"max_ratio", contraction}});
    b.pass_if("positivity", "f >= 0 implies e^{-t Delta} f >= 0", positivity >= -1e-12, 1e-12, {}, {{"min_value", positivity}});
    b.pass_if("mass_conservation", "sum of e^{-t Delta} f against nu is constant in t", mass <= cfg.tol, cfg.tol, {}, {{"max_relative_drift", mass}});
    b.pass_if("half_laplacian_square", "Delta^{1/2} Delta^{1/2} f = Delta f", sq <= 1e-9, 1e-9, {}, {{"max_error", sq}});
    b.pass_if("half_laplacian_energy", "||Delta^{1/2} f||_2^2 = Q(f)", energy <= 1e-9, 1e-9, {}, {{"max_relative_error", energy}});
    b.pass_if("inverse_half_laplacian", "Delta^{-1/2} Delta^{1/2} f = f - P_ker f", inverse <= 1e-9, 1e-9, {}, {{"max_error", inverse}});
    b.pass_if("maximal_function_dominates", "f* >= |f|", maximal_low >= -1e-12, 1e-12, {}, {{"min_slack", maximal_low}});
  });

  for (double p : exponents(cfg, {1.25, 1.5, 2.0})) {
    b.guard("maximal_function_ratio", "||f*||_p <= C_p ||f||_p", [&] {
      json rows = json::array();
      double worst = 0.0;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        double r = 0.0;
        for (int s = 0; s < 3; ++s) {
          const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
          r = std::max(r, lp_norm_vertex(g, maximal_function(dec, f), p) / lp_norm_vertex(g, f, p));
        }
        worst = std::max(worst, r);
        rows.push_back({{"n", g.num_vertices()}, {"boundary", g.has_boundary()}, {"ratio", r}});
      }
      b.add("maximal_function_ratio", "||f*||_p <= C_p ||f||_p", std::isfinite(worst) ? Status::Report : Status::Fail, 0.0,
            {{"p", p}}, {{"max_ratio", worst}, {"by_graph", rows}});
    });
  }

  b.guard("operator_norms", "||e^{-t Delta}||_{p->p}", [&] {
    double one = 0.0, inf = 0.0, markov = 0.0, l2 = 0.0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      const auto n1 = semigroup_pnorm(dec, cfg.t, 1.0);
      const auto ni = semigroup_pnorm(dec, cfg.t, kInf);
      const auto n2 = semigroup_pnorm(dec, cfg.t, 2.0);
      // Boyd's iteration at p = 2 is an independent route to e^{-lambda_0 t}
      auto near2 = semigroup_pnorm(dec, cfg.t, 2.0 - 1e-12);
      one = std::max(one, n1.norm);
      inf = std::max(inf, ni.norm);
      if (!g.has_boundary()) markov = std::max(markov, std::abs(n1.norm - 1.0));
      l2 = std::max(l2, rel(near2.norm, n2.norm));
    }
    b.pass_if("operator_norm_exact", "||e^{-t Delta}||_{1->1}, ||.||_{inf->inf} <= 1, ||.||_{2->2} = e^{-lambda_0 t}",
              one <= 1.0 + cfg.tol && inf <= 1.0 + cfg.tol && markov <= cfg.tol && l2 <= 1e-6, cfg.tol, {{"t", cfg.t}},
              {{"max_norm_1", one}, {"max_norm_inf", inf}, {"markov_defect", markov}, {"power_iteration_vs_exact_2", l2}});
  });

  const auto dirichlet_graphs = random_family(cfg, 20, 3, 25, true, false, 13);
  for (double p : exponents(cfg, {1.25, 1.5, 1.9})) {
    b.guard("operator_norm_interpolation", "||e^{-t Delta}||_{p->p} <= e^{-2 lambda_0 t (p-1)/p}", [&] {
      double worst = 0.0;
      int stated_violations = 0;
      double stated_worst = 0.0;
      for (const auto& [name, g] : dirichlet_graphs) {
        const auto dec = spectral_decompose(g);
        for (double t : ts) {
          const auto r = semigroup_pnorm(dec, t, p);
          worst = std::max(worst, r.norm / r.interpolation_bound);
          if (r.stated_bound && r.norm > *r.stated_bound * (1.0 + 1e-10)) ++stated_violations;
          if (r.stated_bound) stated_worst = std::max(stated_worst, r.norm / *r.stated_bound);
        }
      }
      b.pass_if("operator_norm_interpolation", "||e^{-t Delta}||_{p->p} <= e^{-2 lambda_0 t (p-1)/p}",
                worst <= 1.0 + 1e-10, 1e-10, {{"p", p}, {"graphs", dirichlet_graphs.size()}},
                {{"max_norm_over_bound", worst}});
      b.add("operator_norm_stated_exponent", "||e^{-t Delta}||_{p->p} <= e^{-2 lambda_0 (p-1) t} as stated", Status::Report,
            0.0, {{"p", p}}, {{"violations", stated_violations}, {"max_norm_over_stated_bound", stated_worst}});
    });
  }

  b.guard("cheeger", "lambda_0 <= h and h > 0 iff lambda_0 > 0", [&] {
    bool ok = true;
    double worst = 0.0;
    json rows = json::array();
    for (const auto* family : {&graphs, &dirichlet_graphs}) {
      for (const auto& [name, g] : *family) {
        if (g.num_interior() > 15) continue;
        const auto dec = spectral_decompose(g);
        const auto h = cheeger_exact(g);
        const double l0 = dec.lambda(0);
        ok = ok && l0 <= h.h * (1.0 + 1e-10) + 1e-12 && ((h.h > 0.0) == (l0 > 0.0));
        worst = std::max(worst, h.h > 0.0 ? l0 / h.h : 0.0);
        rows.push_back({{"interior", g.num_interior()}, {"lambda_0", l0}, {"h", h.h}});
      }
    }
    b.pass_if("cheeger_spectral", "lambda_0 <= h and h > 0 iff lambda_0 > 0", ok, 1e-10, {},
              {{"max_lambda0_over_h", worst}, {"rows", rows}});
  });

  b.guard("sobolev_l1", "best l^1 Sobolev constant equals 1/h", [&] {
    double worst = 0.0;
    int tested = 0;
    for (const auto& [name, g] : dirichlet_graphs) {
      if (g.num_interior() > 15) continue;
      const auto dec = spectral_decompose(g);
      const auto h = cheeger_exact(g);
      const auto est = maximize_ratio(g, dec, sobolev(1.0), cfg.budget, cfg.seed);
      worst = std::max(worst, rel(est.best_ratio, 1.0 / h.h));
      ++tested;
    }
    b.pass_if("sobolev_l1_constant", "best l^1 Sobolev constant equals 1/h", worst <= 1e-8, 1e-8, {{"graphs", tested}},
              {{"max_relative_error", worst}});
  });
}

// ---------------------------------------------------------------------------

void lps_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 10, 3, 20, false, true, 21);
  auto rng = stream(cfg.seed, 22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  b.guard("closed_vs_quadrature", "H_a f closed form against time quadrature", [&] {
    double worst = 0.0, diag = 0.0, hpa = 0.0, mono = 0.0, homog = 0.0;
    int triples = 0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      for (int s = 0; s < 3; ++s) {
        const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
        const double thr = lps_divergence_threshold(g, dec, f);
        const double a = cfg.a ? *cfg.a : (-1.0 + 1.9 * unit(rng)) * 0.5 * thr;
        const Eigen::VectorXd closed = lps_H(g, dec, f, a);
        const Eigen::VectorXd quad = lps_H_quadrature(g, dec, f, a);
        worst = std::max(worst, (closed - quad).cwiseAbs().maxCoeff() / closed.cwiseAbs().maxCoeff());
        ++triples;
        const Eigen::VectorXd c = dec.coefficients(f);
        const double tail = c.tail(dec.size() - dec.kernel_dimension()).squaredNorm();
        diag = std::max(diag, rel(ppow(lp_norm_edge(g, lps_H(g, dec, f), 2.0), 2.0), 0.5 * tail));
        const Eigen::VectorXd pos = f.cwiseAbs();
        const Eigen::VectorXd h2 = lps_H2a_closed(g, dec, pos, a);
        const Eigen::VectorXd h2q = lps_Hpa(g, dec, pos, 2.0, a);
        hpa = std::max(hpa, (h2 - h2q).cwiseAbs().maxCoeff() / h2.cwiseAbs().maxCoeff());
        const Eigen::VectorXd lower = lps_H(g, dec, f, a - 0.5 * std::abs(a) - 0.1);
        mono = std::max(mono, (lower - closed).maxCoeff() / closed.cwiseAbs().maxCoeff());
        homog = std::max(homog, (lps_H(g, dec, -3.0 * f, a) - 3.0 * closed).cwiseAbs().maxCoeff() /
                                    closed.cwiseAbs().maxCoeff());
      }
    }
    b.pass_if("closed_vs_quadrature", "H_a f closed form against time quadrature", worst <= 1e-6, 1e-6,
              {{"triples", triples}}, {{"max_relative_error", worst}});
    b.pass_if("l2_diagonal_identity", "||H f||_2^2 = 1/2 sum_{lambda_k > 0} c_k^2", diag <= cfg.tol, cfg.tol, {},
              {{"max_relative_error", diag}});
    b.pass_if("hpa_p2_closed_vs_quadrature", "H_{2,a} via Gamma_2 = 2 |grad|^2 against quadrature", hpa <= 1e-6, 1e-6,
              {}, {{"max_relative_error", hpa}});
    b.pass_if("monotone_in_a", "H_a f >= H_{a'} f for a >= a'", mono <= 1e-12, 1e-12, {}, {{"max_violation", mono}});
    b.pass_if("homogeneity", "H_a(c f) = |c| H_a f", homog <= cfg.tol, cfg.tol, {}, {{"max_error", homog}});
  });

  b.guard("constant_function", "constant f has H_a f = 0 and H_{p,a} f = 0 without boundary", [&] {
    const WeightedGraph g = cycle_graph(7);
    const auto dec = spectral_decompose(g);
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(7, 2.0);
    const double h = lps_H(g, dec, f).cwiseAbs().maxCoeff();
    const double hp = lps_Hpa(g, dec, f, 1.5).cwiseAbs().maxCoeff();
    b.pass_if("constant_function", "constant f has H_a f = 0 and H_{p,a} f = 0 without boundary", h == 0.0 && hp == 0.0, 0.0,
              {}, {{"max_H", h}, {"max_Hpa", hp}});
  });

  const auto dirichlet_graphs = random_family(cfg, 4, 4, 16, true, false, 23);
  for (double p : exponents(cfg, {1.25, 1.5, 2.0})) {
    b.guard("tilted_ratios", "||H_a f||_p and ||H_{p,a} f||_p against ||f||_p", [&] {
      json rows = json::array();
      bool key = true;
      double stable_lo = kInf, stable_hi = 0.0;
      for (const auto& [name, g] : dirichlet_graphs) {
        const auto dec = spectral_decompose(g);
        const double l0 = dec.lambda(0);
        std::vector<Eigen::VectorXd> samples;
        for (int s = 0; s < 2; ++s) samples.push_back(normal_vector(rng, g.num_interior()));
        const double interp = 2.0 * l0 * (p - 1.0) / p;
        const double stated = 2.0 * l0 * (p - 1.0);
        for (const auto& [label, base] : {std::pair{"interpolated", interp}, std::pair{"stated", stated}}) {
          for (double frac : {0.5, 0.9, 0.99}) {
            const double a = frac * base;
            const LpsRatios r = lps_ratios(g, dec, samples, p, a);
            key = key && r.key_holds;
            if (std::string(label) == "interpolated" && frac == 0.5) {
              stable_lo = std::min(stable_lo, r.H_ratio);
              stable_hi = std::max(stable_hi, r.H_ratio);
            }
            rows.push_back({{"interior", g.num_interior()},
                            {"threshold", label},
                            {"fraction", frac},
                            {"a", a},
                            {"H_ratio", r.H_ratio},
                            {"Hpa_ratio", r.Hpa_ratio},
                            {"split_ratio", r.split_ratio},
                            {"key_ratio", r.key_ratio},
                            {"key_constant", r.key_constant}});
          }
        }
      }
      b.pass_if("square_function_comparison", "||H_a f||_p <= C ||H_{p,a} f||_p for f >= 0", key, 1e-8, {{"p", p}}, {});
      b.add("tilted_ratios", "||H_a f||_p and ||H_{p,a} f||_p against ||f||_p", Status::Report, 0.0, {{"p", p}},
            {{"rows", rows}, {"H_ratio_min", stable_lo}, {"H_ratio_max", stable_hi}});
    });
  }

  for (double p : exponents(cfg, {1.25, 1.5, 2.0})) {
    b.guard("untilted_envelope", "||H f||_p <= C ||f||_p", [&] {
      json rows = json::array();
      double worst = 0.0;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        double r = 0.0;
        for (int s = 0; s < 3; ++s) {
          const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
          r = std::max(r, lp_norm_edge(g, lps_H(g, dec, f), p) / lp_norm_vertex(g, f, p));
        }
        worst = std::max(worst, r);
        rows.push_back({{"n", g.num_vertices()}, {"ratio", r}});
      }
      b.add("untilted_envelope", "||H f||_p <= C ||f||_p", std::isfinite(worst) ? Status::Report : Status::Fail, 0.0,
            {{"p", p}}, {{"max_ratio", worst}, {"by_graph", rows}});
    });
  }
}

// ---------------------------------------------------------------------------

void homogeneity_check(Builder& b, const std::string& id, const std::vector<NamedGraph>& graphs,
                       const std::vector<RatioFunctional>& functionals, std::mt19937_64& rng, double tol) {
  b.guard(id, "ratio functionals are 0-homogeneous", [&] {
    double worst = 0.0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      for (const auto& F : functionals) {
        if (F.constraint == Constraint::MeanZero && g.has_boundary()) continue;
        const Eigen::VectorXd f = apply_constraint(g, F.constraint, normal_vector(rng, g.num_interior()));
        const double base = ratio_eval(g, dec, F, f);
        for (double c : {-3.0, 0.1, 7.0}) {
          if (F.constraint == Constraint::NonNegative && c < 0.0) continue;
          worst = std::max(worst, rel(ratio_eval(g, dec, F, c * f), base));
        }
      }
    }
    b.pass_if(id, "ratio functionals are 0-homogeneous", worst <= tol, tol, {{"functionals", functionals.size()}},
              {{"max_relative_change", worst}});
  });
}

void mip_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 6, 5, 40, false, true, 31);
  auto rng = stream(cfg.seed, 32);
  for (double p : exponents(cfg, {1.25, 1.5, 2.0})) {
    b.guard("mip_envelope", "||Df||_p^2 <= C_p ||f||_p ||Delta f||_p", [&] {
      json rows = json::array();
      double worst = 0.0, worst_vertex = 0.0;
      bool consistent = true;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        const auto e = maximize_ratio(g, dec, mip(p), cfg.budget, cfg.seed);
        const auto ev = maximize_ratio(g, dec, mip_vertex(p), cfg.budget, cfg.seed);
        consistent = consistent && e.witness_consistent && ev.witness_consistent;
        worst = std::max(worst, e.best_ratio);
        worst_vertex = std::max(worst_vertex, ev.best_ratio);
        rows.push_back({{"n", g.num_vertices()}, {"M", bl_constant(g)}, {"mip", e.best_ratio}, {"mip_vertex", ev.best_ratio}});
      }
      b.add("mip_envelope", "||Df||_p^2 <= C_p ||f||_p ||Delta f||_p", std::isfinite(worst) && consistent ? Status::Report : Status::Fail,
            0.0, {{"p", p}}, {{"envelope", worst}, {"vertex_gradient_envelope", worst_vertex}, {"by_graph", rows}});
      if (p == 2.0)
        b.pass_if("mip_p2_bound", "||Df||_2^2 <= ||f||_2 ||Delta f||_2", worst <= 1.0 + 1e-9, 1e-9, {{"p", p}},
                  {{"best_ratio", worst}});
    });
  }

  for (double p : exponents(cfg, {1.5, 2.0})) {
    b.guard("gp_mip_chain", "gradient semigroup bound and multiplicative inequality imply each other", [&] {
      bool chain = true, factor = true;
      double composed = 0.0, gsup = 0.0;
      int samples = 0, degenerate = 0;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        for (int s = 0; s < 2; ++s) {
          const Eigen::VectorXd f = normal_vector(rng, g.num_interior());
          const ChainRecord r = gp_mip_chain(g, dec, f, p);
          chain = chain && r.chain_holds;
          factor = factor && r.factorization_holds;
          composed = std::max(composed, r.composed);
          gsup = std::max(gsup, r.g_sup);
          ++samples;
        }
        if (!g.has_boundary()) {
          const ChainRecord r = gp_mip_chain(g, dec, Eigen::VectorXd::Ones(g.num_interior()), p);
          chain = chain && r.degenerate && r.chain_holds;
          ++degenerate;
        }
      }
      const bool p2 = p != 2.0 || (composed <= 2.0 && gsup <= 2.0);
      b.pass_if("gp_mip_chain", "gradient semigroup bound and multiplicative inequality imply each other",
                chain && factor && p2, 1e-8, {{"p", p}, {"samples", samples}, {"degenerate_samples", degenerate}},
                {{"max_composed_mip_constant", composed}, {"max_t_grad_squared", gsup}});
    });
  }

  b.guard("gp_eigenfunction", "sup_t t^{1/2} ||D e^{-t Delta} phi||_2 / ||phi||_2 = (2e)^{-1/2}", [&] {
    double worst = 0.0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      for (Index k = dec.kernel_dimension(); k < dec.size(); k += std::max<Index>(1, dec.size() / 3)) {
        const Eigen::VectorXd phi = dec.eigenfunctions().col(k);
        worst = std::max(worst, rel(gradient_semigroup_sup(g, dec, phi, 2.0), 1.0 / std::sqrt(2.0 * std::exp(1.0))));
      }
    }
    b.pass_if("gp_eigenfunction", "sup_t t^{1/2} ||D e^{-t Delta} phi||_2 / ||phi||_2 = (2e)^{-1/2}", worst <= 1e-8, 1e-8,
              {}, {{"max_relative_error", worst}});
  });

  homogeneity_check(b, "mip_homogeneity", graphs, {mip(1.5), mip_vertex(1.5), gp(1.5, cfg.t)}, rng, cfg.tol);
}

// ---------------------------------------------------------------------------

void riesz_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 6, 3, 30, false, true, 41);
  auto rng = stream(cfg.seed, 42);
  b.guard("riesz_edge_p2", "||Df||_2 = ||Delta^{1/2} f||_2", [&] {
    double sampled = 0.0, searched = 0.0;
    for (const auto& [name, g] : graphs) {
      const auto dec = spectral_decompose(g);
      for (int s = 0; s < 5; ++s)
        sampled = std::max(sampled, std::abs(ratio_eval(g, dec, riesz_edge(2.0), normal_vector(rng, g.num_interior())) - 1.0));
      searched = std::max(searched, std::abs(maximize_ratio(g, dec, riesz_edge(2.0), cfg.budget, cfg.seed).best_ratio - 1.0));
    }
    b.pass_if("riesz_edge_p2", "||Df||_2 = ||Delta^{1/2} f||_2", sampled <= cfg.tol && searched <= 1e-8, 1e-8, {{"p", 2.0}},
              {{"max_sampled_deviation", sampled}, {"max_searched_deviation", searched}});
  });

  for (double p : exponents(cfg, {1.5, 3.0})) {
    b.guard("riesz_constants", "Riesz transform ratios", [&] {
      json rows = json::array();
      bool finite = true;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        json row{{"n", g.num_vertices()}, {"boundary", g.has_boundary()}};
        for (const auto& F : {riesz_edge(p), riesz_vertex(p), reverse_riesz(p)}) {
          const auto e = maximize_ratio(g, dec, F, cfg.budget, cfg.seed);
          finite = finite && std::isfinite(e.best_ratio) && e.witness_consistent;
          row[F.name] = e.best_ratio;
        }
        rows.push_back(row);
      }
      b.add("riesz_constants", "Riesz transform ratios", finite ? Status::Report : Status::Fail, 0.0, {{"p", p}},
            {{"by_graph", rows}});
    });
  }

  b.guard("excluded_subspace", "constant f is excluded where Delta^{1/2} f = 0", [&] {
    const WeightedGraph g = cycle_graph(5);
    const auto dec = spectral_decompose(g);
    bool thrown = false;
    try {
      ratio_eval(g, dec, norm_equiv(Quantity::EdgeGradient, Quantity::MeanZeroPart, 2.0), Eigen::VectorXd::Ones(5));
    } catch (const ExcludedSubspace&) {
      thrown = true;
    }
    b.pass_if("excluded_subspace", "constant f is excluded where Delta^{1/2} f = 0", thrown, 0.0, {}, {});
  });

  b.guard("tree_riesz_growth", "Riesz ratio at a Dirac mass on the expanding tree", [&] {
    json rows = json::array();
    for (Index n : {3, 4, 5, 6}) {
      const WeightedGraph g = expanding_tree(n, 2 * n + 2);
      const auto dec = spectral_decompose(g);
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(g.num_interior());
      delta[g.interior_position(*g.find(expanding_tree_spine_id(2 * n)))] = 1.0;
      rows.push_back({{"n", n},
                      {"riesz_vertex_p1.5", ratio_eval(g, dec, riesz_vertex(1.5), delta)},
                      {"riesz_edge_p1.5", ratio_eval(g, dec, riesz_edge(1.5), delta)}});
    }
    b.add("tree_riesz_growth", "Riesz ratio at a Dirac mass on the expanding tree", Status::Report, 0.0, {{"p", 1.5}},
          {{"rows", rows}});
  });

  homogeneity_check(b, "riesz_homogeneity", graphs,
                    {riesz_edge(1.5), riesz_vertex(1.5), reverse_riesz(1.5), sobolev(1.5),
                     norm_equiv(Quantity::EdgeGradient, Quantity::MeanZeroPart, 1.5, Constraint::MeanZero)},
                    rng, cfg.tol);
}

// ---------------------------------------------------------------------------

std::vector<RatioFunctional> thm13_functionals(double p) {
  return {norm_equiv(Quantity::EdgeGradient, Quantity::HalfLaplacian, p),
          norm_equiv(Quantity::HalfLaplacian, Quantity::EdgeGradient, p),
          norm_equiv(Quantity::EdgeGradient, Quantity::Function, p),
          norm_equiv(Quantity::Function, Quantity::EdgeGradient, p)};
}

std::vector<RatioFunctional> thm14_functionals(double p) {
  const Quantity qs[] = {Quantity::EdgeGradient, Quantity::MeanZeroPart, Quantity::HalfLaplacian};
  std::vector<RatioFunctional> out;
  for (Quantity a : qs)
    for (Quantity c : qs)
      if (a != c) out.push_back(norm_equiv(a, c, p, Constraint::MeanZero));
  return out;
}

void thm13_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 4, 4, 20, true, false, 51);
  for (double p : exponents(cfg, {1.5, 2.0, 3.0})) {
    b.guard("dirichlet_equivalence", "||Df||_p ~ ||Delta^{1/2} f||_p ~ ||f||_p with a spectral gap", [&] {
      json rows = json::array();
      bool finite = true;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        json row{{"interior", g.num_interior()}, {"lambda_0", dec.lambda(0)}};
        for (const auto& F : thm13_functionals(p)) {
          const auto e = maximize_ratio(g, dec, F, cfg.budget, cfg.seed);
          finite = finite && std::isfinite(e.best_ratio) && e.best_ratio > 0.0 && e.witness_consistent;
          row[F.name] = e.best_ratio;
        }
        rows.push_back(row);
      }
      b.pass_if("dirichlet_equivalence", "||Df||_p ~ ||Delta^{1/2} f||_p ~ ||f||_p with a spectral gap", finite, 0.0,
                {{"p", p}}, {{"by_graph", rows}});
    });
  }

  if (!cfg.graph) {
    for (double p : exponents(cfg, {1.5, 3.0})) {
      b.guard("tree_envelopes", "equivalence constants over regular trees with Dirichlet leaves", [&] {
        json rows = json::array();
        double lo = kInf, hi = 0.0;
        for (Index depth = 3; depth <= 6; ++depth) {
          const WeightedGraph g = regular_tree(2, depth);
          const auto dec = spectral_decompose(g);
          double envelope = 0.0;
          json row{{"depth", depth}, {"lambda_0", dec.lambda(0)}, {"M", bl_constant(g)}};
          for (const auto& F : thm13_functionals(p)) {
            const auto e = maximize_ratio(g, dec, F, cfg.budget, cfg.seed);
            row[F.name] = e.best_ratio;
            envelope = std::max(envelope, e.best_ratio);
          }
          row["envelope"] = envelope;
          lo = std::min(lo, envelope);
          hi = std::max(hi, envelope);
          rows.push_back(row);
        }
        b.add("tree_envelopes", "equivalence constants over regular trees with Dirichlet leaves", Status::Report, 0.0,
              {{"p", p}, {"branching", 2}}, {{"by_depth", rows}, {"max_over_min", hi / lo}});
      });
    }
  }

  for (double p : exponents(cfg, {2.0, 3.0, 4.0})) {
    if (p < 2.0) continue;
    b.guard("vertex_riesz_large_p", "|| |grad f| ||_p <= C ||Delta^{1/2} f||_p for p >= 2", [&] {
      double worst = 0.0;
      for (const auto& [name, g] : graphs) {
        const auto dec = spectral_decompose(g);
        worst = std::max(worst, maximize_ratio(g, dec, riesz_vertex(p), cfg.budget, cfg.seed).best_ratio);
      }
      b.pass_if("vertex_riesz_large_p", "|| |grad f| ||_p <= C ||Delta^{1/2} f||_p for p >= 2", std::isfinite(worst), 0.0,
                {{"p", p}}, {{"max_ratio", worst}});
    });
  }
}

void thm14_suite(Builder& b, const SuiteConfig& cfg) {
  const auto graphs = random_family(cfg, 10, 4, 20, false, false, 61);
  for (double p : exponents(cfg, {1.5, 2.0, 3.0})) {
    b.guard("mean_zero_equivalence", "||Df||_p ~ ||f - mean f||_p ~ ||Delta^{1/2} f||_p", [&] {
      json rows = json::array();
      bool finite = true;
      for (const auto& [name, g] : graphs) {
        if (g.has_boundary()) continue;
        const auto dec = spectral_decompose(g);
        json row{{"n", g.num_vertices()}};
        for (const auto& F : thm14_functionals(p)) {
          const auto e = maximize_ratio(g, dec, F, cfg.budget, cfg.seed);
          finite = finite && std::isfinite(e.best_ratio) && e.best_ratio > 0.0 && e.witness_consistent;
          row[F.name] = e.best_ratio;
        }
        rows.push_back(row);
      }
      b.pass_if("mean_zero_equivalence", "||Df||_p ~ ||f - mean f||_p ~ ||Delta^{1/2} f||_p", finite && !rows.empty(),
                0.0, {{"p", p}}, {{"by_graph", rows}});
    });
  }
}

// ---------------------------------------------------------------------------

void counterexamples_suite(Builder& b, const SuiteConfig& cfg) {
  const double p = cfg.p.value_or(1.5);
  const std::vector<double> eps{1e-2, 1e-4, 1e-6};
  b.guard("lattice_slope", "vertex and edge gradient norms are not equivalent on the eps-lattice", [&] {
    if (!(p > 1.0 && p < 2.0)) {
      b.add("lattice_slope", "vertex and edge gradient norms are not equivalent on the eps-lattice", Status::Report, 0.0,
            {{"p", p}}, {{"applicable", false}});
      return;
    }
    const LatticeResult r = counterexample_nonequiv(1001, eps, p, 1000);
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"eps", row.eps}, {"ratio", row.ratio}});
    b.add("lattice_slope", "vertex and edge gradient norms are not equivalent on the eps-lattice", Status::Report, 0.05,
          {{"p", p}, {"k", r.k}, {"K", r.K}},
          {{"slope", r.slope}, {"expected_slope", r.expected}, {"rows", rows}});
    b.pass_if("lattice_truncation", "doubling the truncation leaves the tent norms unchanged", r.truncation_gap <= 1e-12,
              1e-12, {{"p", p}}, {{"max_relative_change", r.truncation_gap}});
    json sweep = json::array();
    for (Index k : {1000, 10000, 100000}) {
      const LatticeResult rk = counterexample_nonequiv(k + 1, eps, p, k);
      sweep.push_back({{"k", k}, {"slope", rk.slope}});
    }
    b.add("lattice_slope_in_k", "slope approaches 1/2 - 1/p as k grows", Status::Report, 0.0, {{"p", p}},
          {{"by_k", sweep}, {"expected_slope", r.expected}});
    const double unit[] = {1.0};
    const LatticeResult one = counterexample_nonequiv(1001, unit, p, 1000);
    b.add("lattice_uniform_weights", "eps = 1 gives an O(1) ratio", Status::Report, 0.0, {{"p", p}, {"eps", 1.0}},
          {{"ratio", one.rows[0].ratio}});
  });

  for (double q : {p, 2.0}) {
    if (!(q > 1.0 && q <= 2.0)) continue;
    b.guard("tree_growth", "Dirac-mass test on the expanding tree", [&] {
      const std::vector<Index> ns{10, 20, 40, 80};
      const TreeResult r = counterexample_tree(ns, q);
      json rows = json::array();
      double display = 0.0, cross = 0.0;
      for (const auto& row : r.rows) {
        const double n = static_cast<double>(row.n);
        const double lhs = std::pow(2.0 + std::pow(2.0 * n, 1.0 - q / 2.0) + std::pow(2.0 * n + 2.0, 1.0 - q / 2.0), 2.0);
        const double rhs = 2.0 * (2.0 + std::pow(2.0 * n, 1.0 - q) + std::pow(2.0 * n + 2.0, 1.0 - q));
        display = std::max({display, rel(row.lhs, lhs), rel(row.rhs_factor, rhs)});
        cross = std::max(cross, row.cross_checked ? row.cross_check_error : kInf);
        rows.push_back({{"n", row.n},
                        {"lhs", row.lhs},
                        {"rhs_factor", row.rhs_factor},
                        {"char_ratio", row.char_ratio},
                        {"mi_ratio", row.mi_ratio}});
      }
      b.pass_if("tree_sides", "Dirac-mass sides match the closed forms and direct norms", display <= 1e-12 && cross <= 1e-10,
                1e-10, {{"p", q}}, {{"max_closed_form_error", display}, {"max_direct_norm_error", cross}});
      b.pass_if("tree_rhs_bounded", "right-hand factor <= 8", r.max_rhs_factor <= 8.0, 0.0, {{"p", q}},
                {{"max_rhs_factor", r.max_rhs_factor}});
      b.add("tree_exponents", "left side grows like n^{2-p}", Status::Report, 0.1, {{"p", q}},
            {{"lhs_exponent", r.lhs_exponent},
             {"char_ratio_exponent", r.char_ratio_exponent},
             {"mi_exponent", r.mi_exponent},
             {"mi_power_exponent", r.mi_power_exponent},
             {"expected", r.expected},
             {"rows", rows}});
      if (q == 2.0)
        b.pass_if("tree_p2_bounded", "at p = 2 the Dirac-mass ratio stays bounded in n", std::abs(r.char_ratio_exponent) <= 0.1,
                  0.1, {{"p", q}}, {{"char_ratio_exponent", r.char_ratio_exponent}});
    });
  }
}

void run_one(const std::string& id, Builder& b, const SuiteConfig& cfg) {
  if (id == "calculus") calculus_suite(b, cfg);
  else if (id == "semigroup") semigroup_suite(b, cfg);
  else if (id == "lps") lps_suite(b, cfg);
  else if (id == "mip") mip_suite(b, cfg);
  else if (id == "riesz") riesz_suite(b, cfg);
  else if (id == "thm13") thm13_suite(b, cfg);
  else if (id == "thm14") thm14_suite(b, cfg);
  else if (id == "counterexamples") counterexamples_suite(b, cfg);
  else throw std::invalid_argument("unknown suite '" + id + "'");
}

}  // namespace

SuiteReport run_suite(const std::string& id, const SuiteConfig& config) {
  SuiteReport report;
  report.suite = id;
  report.seed = config.seed;
  report.version = GRAPHRIESZ_VERSION;
  if (id == "all") {
    for (const auto& name : suite_names()) {
      Builder b{report, name + "."};
      run_one(name, b, config);
    }
  } else {
    Builder b{report, ""};
    run_one(id, b, config);
  }
  return report;
}

}  // namespace graphriesz
