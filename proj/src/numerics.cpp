#include "graphriesz/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace graphriesz {
namespace {

struct Panel {
  double a, b;
  Eigen::VectorXd coarse;  // GL8 on [a, b]
  Eigen::VectorXd fine;    // GL8 on both halves
};

Eigen::VectorXd gl8(const std::function<Eigen::VectorXd(double)>& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // abscissa() holds the nonnegative nodes; 8 is even, so no zero node
  Eigen::VectorXd acc;
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::VectorXd s = f(mid + half * x[k]) + f(mid - half * x[k]);
    if (acc.size() == 0) acc = w[k] * s;
    else acc += w[k] * s;
  }
  return half * acc;
}

Panel make_panel(const std::function<Eigen::VectorXd(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return {a, b, gl8(f, a, b), gl8(f, a, m) + gl8(f, m, b)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<Eigen::VectorXd(double)>& f,
                                    std::span<const double> breakpoints, double rel_tol, double abs_tol,
                                    int max_panels) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_adaptive needs at least two breakpoints");
  std::vector<Panel> panels;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) throw std::invalid_argument("breakpoints must increase");
    panels.push_back(make_panel(f, breakpoints[k], breakpoints[k + 1]));
  }
  while (true) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(panels.front().fine.size());
    Eigen::VectorXd err = Eigen::VectorXd::Zero(total.size());
    for (const auto& p : panels) {
      total += p.fine;
      err += (p.fine - p.coarse).cwiseAbs();
    }
    const Eigen::VectorXd allowed = (rel_tol * total.cwiseAbs()).array() + abs_tol;
    Eigen::Index worst_comp = -1;
    double worst_ratio = 1.0;
    for (Eigen::Index i = 0; i < total.size(); ++i) {
      const double r = err[i] / allowed[i];
      if (r > worst_ratio) {
        worst_ratio = r;
        worst_comp = i;
      }
    }
    if (worst_comp < 0 || static_cast<int>(panels.size()) >= max_panels)
      return {total, err, static_cast<int>(panels.size())};
    std::size_t worst_panel = 0;
    double worst_err = -1.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      const double e = std::abs(panels[k].fine[worst_comp] - panels[k].coarse[worst_comp]);
      if (e > worst_err) {
        worst_err = e;
        worst_panel = k;
      }
    }
    const Panel p = panels[worst_panel];
    const double m = 0.5 * (p.a + p.b);
    panels[worst_panel] = make_panel(f, p.a, m);
    panels.push_back(make_panel(f, m, p.b));
  }
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

}  // namespace graphriesz
