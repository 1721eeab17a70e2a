#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>

namespace graphriesz {

struct QuadratureResult {
  Eigen::VectorXd value;
  Eigen::VectorXd error;  ///< per-component error estimate
  int panels = 0;
};

/// Vector-valued adaptive Gauss-Legendre (8 nodes per panel) quadrature over
/// [a, b] starting from the given breakpoints. Panels are bisected, worst
/// first, until every component satisfies |err_i| <= rel_tol |I_i| + abs_tol
/// or `max_panels` is reached.
QuadratureResult integrate_adaptive(const std::function<Eigen::VectorXd(double)>& f,
                                    std::span<const double> breakpoints, double rel_tol, double abs_tol,
                                    int max_panels = 20000);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Rounds to 15 significant decimal digits (report serialization).
double round_significant(double v, int digits = 15);

}  // namespace graphriesz
