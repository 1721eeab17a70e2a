#pragma once

#include "graphriesz/graph.hpp"
#include "graphriesz/spectral.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace graphriesz {

struct LpsQuadrature {
  double rel_tol = 1e-10;
  double tail_rel = 1e-10;  ///< analytic tail bound relative to the accumulated integral
  int max_panels = 20000;
};

/// Exponential tilts a at or above this value make H_a f diverge: twice the
/// smallest non-kernel eigenvalue whose mode is present in f (relative
/// coefficient above 1e-12) and has nonzero edge differences. +inf if f has
/// no such mode.
double lps_divergence_threshold(const WeightedGraph& g, const SpectralDecomposition& dec,
                                const Eigen::Ref<const Eigen::VectorXd>& f);

/// (H_a f)(e) = (int_0^inf e^{at} |D e^{-t Delta} f|^2(e) dt)^{1/2} in closed form:
/// H_a f(e)^2 = sum_{j,k} c_j c_k D phi_j(e) D phi_k(e) / (lambda_j + lambda_k - a).
/// Throws std::domain_error if a is at or beyond the divergence threshold.
Eigen::VectorXd lps_H(const WeightedGraph& g, const SpectralDecomposition& dec,
                      const Eigen::Ref<const Eigen::VectorXd>& f, double a = 0.0);

/// Same quantity by adaptive Gauss-Legendre quadrature in t.
Eigen::VectorXd lps_H_quadrature(const WeightedGraph& g, const SpectralDecomposition& dec,
                                 const Eigen::Ref<const Eigen::VectorXd>& f, double a = 0.0,
                                 const LpsQuadrature& opts = {});

/// (H_{p,a} f)(x) = (int_0^inf e^{at} Gamma_p(e^{-t Delta} f)(x) dt)^{1/2} at
/// interior x, by quadrature. f >= 0, p in (1, 2].
Eigen::VectorXd lps_Hpa(const WeightedGraph& g, const SpectralDecomposition& dec,
                        const Eigen::Ref<const Eigen::VectorXd>& f, double p, double a = 0.0,
                        const LpsQuadrature& opts = {});

/// H_{2,a} f in closed form: Gamma_2 = 2 |grad|^2 gives
/// (H_{2,a} f)(x)^2 = (1/nu_x) sum_{e ~ x} mu_e (H_a f)(e)^2.
Eigen::VectorXd lps_H2a_closed(const WeightedGraph& g, const SpectralDecomposition& dec,
                               const Eigen::Ref<const Eigen::VectorXd>& f, double a = 0.0);

/// C with ||H_a f||_{l^p(E,mu)} <= C ||H_{p,a} f||_{l^p(V,nu)} for f >= 0, from
/// mu_e (p-1) |Du|^2(e) <= nu_x Gamma_p(u)(x) + nu_y Gamma_p(u)(y):
/// C^p = (p-1)^{-p/2} max_x nu_x^{p/2-1} sum_{y~x} mu_xy^{1-p/2}.
double lps_key_constant(const WeightedGraph& g, double p);

struct LpsRatios {
  double p = 0.0;
  double a = 0.0;
  double H_ratio = 0.0;        ///< sup ||H_a f||_p / ||f||_p
  double Hpa_ratio = 0.0;      ///< sup ||H_{p,a} f||_p / ||f||_p over nonnegative f
  double key_ratio = 0.0;      ///< sup ||H_a f||_p / ||H_{p,a} f||_p over nonnegative f
  double split_ratio = 0.0;    ///< sup (||H_a f_+||_p + ||H_a f_-||_p) / ||f||_p
  double key_constant = 0.0;
  bool key_holds = true;
  int samples = 0;
};

/// Ratios over a sample of functions. Signed samples feed H_ratio and
/// split_ratio; nonnegative samples (|f|) feed the H_{p,a} ratios.
LpsRatios lps_ratios(const WeightedGraph& g, const SpectralDecomposition& dec,
                     std::span<const Eigen::VectorXd> samples, double p, double a,
                     const LpsQuadrature& opts = {});

}  // namespace graphriesz
