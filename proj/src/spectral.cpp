#include "graphriesz/spectral.hpp"

#include "graphriesz/calculus.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace graphriesz {

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, const JacobiOptions& opts) {
  const Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix not square");
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = a.norm();
  int sweep = 0;
  auto off_norm = [&] {
    double s = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  while (off_norm() > opts.tolerance * scale) {
    if (sweep == opts.max_sweeps)
      throw ConvergenceError("Jacobi eigensolver did not converge after " + std::to_string(sweep) + " sweeps",
                             sweep);
    ++sweep;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  return {a.diagonal(), v, sweep};
}

namespace {

Index first_max_entry(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) >= top * (1.0 - 1e-9)) return i;
  return 0;
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions,
                                             Eigen::VectorXd nu, int sweeps)
    : eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)),
      nu_(std::move(nu)),
      sweeps_(sweeps) {
  const double top = eigenvalues_.size() ? eigenvalues_.maxCoeff() : 0.0;
  zero_threshold_ = 1e-9 * std::max(1.0, top);
  while (kernel_dimension_ < eigenvalues_.size() && eigenvalues_[kernel_dimension_] < zero_threshold_)
    ++kernel_dimension_;
}

std::optional<double> SpectralDecomposition::gap_above_zero() const {
  if (kernel_dimension_ == size()) return std::nullopt;
  return eigenvalues_[kernel_dimension_];
}

Eigen::VectorXd SpectralDecomposition::coefficients(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != size()) throw std::invalid_argument("vertex function length mismatch");
  return eigenfunctions_.transpose() * nu_.cwiseProduct(f);
}

Eigen::VectorXd SpectralDecomposition::synthesize(const Eigen::Ref<const Eigen::VectorXd>& c) const {
  return eigenfunctions_ * c;
}

Eigen::VectorXd SpectralDecomposition::kernel_projection(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  const Eigen::VectorXd c = coefficients(f);
  return eigenfunctions_.leftCols(kernel_dimension_) * c.head(kernel_dimension_);
}

Eigen::VectorXd SpectralDecomposition::apply_weights(const Eigen::Ref<const Eigen::VectorXd>& f,
                                                     const Eigen::Ref<const Eigen::VectorXd>& weights) const {
  return eigenfunctions_ * weights.cwiseProduct(coefficients(f));
}

Eigen::MatrixXd SpectralDecomposition::operator_matrix(const Eigen::Ref<const Eigen::VectorXd>& weights) const {
  return eigenfunctions_ * weights.asDiagonal() * eigenfunctions_.transpose() * nu_.asDiagonal();
}

SpectralDecomposition spectral_decompose(const WeightedGraph& g, const JacobiOptions& opts) {
  const Index n = g.num_interior();
  const Eigen::VectorXd& nu = g.nu_interior();
  const Eigen::VectorXd root = nu.cwiseSqrt();
  // S = N^{1/2} Delta N^{-1/2} = N^{-1/2} (Deg - W) N^{-1/2}, symmetric
  Eigen::MatrixXd s = root.asDiagonal() * laplacian_matrix(g) * root.cwiseInverse().asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  SymmetricEigen eig = jacobi_eigen(std::move(s), opts);

  const double top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double tie = 1e-10 * std::max(1.0, top);
  Eigen::MatrixXd phi = root.cwiseInverse().asDiagonal() * eig.vectors;
  std::vector<Index> lead(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const Index i = first_max_entry(phi.col(k));
    if (phi(i, k) < 0.0) phi.col(k) *= -1.0;
    lead[static_cast<std::size_t>(k)] = i;
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return eig.values[a] < eig.values[b]; });
  // within clusters of numerically equal eigenvalues order by leading entry
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && eig.values[order[end]] - eig.values[order[end - 1]] <= tie) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Index a, Index b) { return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)]; });
    start = end;
  }
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Index k = 0; k < n; ++k) {
    values[k] = eig.values[order[static_cast<std::size_t>(k)]];
    vectors.col(k) = phi.col(order[static_cast<std::size_t>(k)]);
  }
  return SpectralDecomposition(std::move(values), std::move(vectors), nu, eig.sweeps);
}

namespace {

Eigen::VectorXd heat_weights(const SpectralDecomposition& dec, double t) {
  if (!(t >= 0.0)) throw std::domain_error("heat semigroup needs t >= 0");
  Eigen::VectorXd w(dec.size());
  for (Index k = 0; k < dec.size(); ++k) w[k] = std::exp(-dec.lambda(k) * t);
  return w;
}

Eigen::VectorXd power_weights(const SpectralDecomposition& dec, double s) {
  Eigen::VectorXd w(dec.size());
  for (Index k = 0; k < dec.size(); ++k) {
    if (dec.in_kernel(k)) w[k] = s == 0.0 ? 1.0 : 0.0;
    else w[k] = std::pow(dec.eigenvalues()[k], s);
  }
  return w;
}

}  // namespace

Eigen::VectorXd heat_apply(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f, double t) {
  return dec.apply_weights(f, heat_weights(dec, t));
}

Eigen::MatrixXd heat_matrix(const SpectralDecomposition& dec, double t) {
  return dec.operator_matrix(heat_weights(dec, t));
}

Eigen::VectorXd frac_power_apply(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f,
                                 double s, double tol) {
  if (s < 0.0 && dec.kernel_dimension() > 0) {
    const Eigen::VectorXd c = dec.coefficients(f);
    const double ker = c.head(dec.kernel_dimension()).norm();
    if (ker > tol * std::max(c.norm(), 1e-300))
      throw std::domain_error("negative power of the Laplacian needs f orthogonal to its kernel (subtract the mean)");
  }
  return dec.apply_weights(f, power_weights(dec, s));
}

Eigen::MatrixXd frac_power_matrix(const SpectralDecomposition& dec, double s) {
  return dec.operator_matrix(power_weights(dec, s));
}

Eigen::VectorXd maximal_function(const SpectralDecomposition& dec, const Eigen::Ref<const Eigen::VectorXd>& f,
                                 int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("maximal_function needs at least two grid points");
  const Eigen::VectorXd c = dec.coefficients(f);
  const Eigen::MatrixXd& phi = dec.eigenfunctions();
  Eigen::VectorXd out = f.cwiseAbs().cwiseMax(dec.kernel_projection(f).cwiseAbs());
  Eigen::VectorXd w(dec.size());
  for (int i = 0; i < grid_points; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / (grid_points - 1));
    for (Index k = 0; k < dec.size(); ++k) w[k] = std::exp(-dec.lambda(k) * t) * c[k];
    out = out.cwiseMax((phi * w).cwiseAbs());
  }
  return out;
}

SemigroupNorm semigroup_pnorm(const SpectralDecomposition& dec, double t, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  SemigroupNorm out;
  out.t = t;
  out.p = p;
  const double lambda0 = dec.lambda(0);
  if (p <= 2.0) out.interpolation_bound = std::exp(-2.0 * lambda0 * t * (1.0 - 1.0 / p));
  else out.interpolation_bound = std::exp(-2.0 * lambda0 * t / p);
  if (p > 1.0 && p <= 2.0) out.stated_bound = std::exp(-2.0 * lambda0 * (p - 1.0) * t);

  const Eigen::MatrixXd P = heat_matrix(dec, t);
  const Eigen::VectorXd& nu = dec.nu();
  out.exact = true;
  if (p == 1.0) {
    // ||P||_{1->1} on l^1(nu): max_j sum_i nu_i |P_ij| / nu_j
    out.norm = (nu.transpose() * P.cwiseAbs()).cwiseQuotient(nu.transpose()).maxCoeff();
    return out;
  }
  if (std::isinf(p)) {
    out.norm = P.cwiseAbs().rowwise().sum().maxCoeff();
    return out;
  }
  if (p == 2.0) {
    out.norm = std::exp(-lambda0 * t);
    return out;
  }
  out.exact = false;
  // Boyd's power method for ||A||_p with A = N^{1/p} P N^{-1/p} on unweighted l^p
  const Eigen::VectorXd s = nu.array().pow(1.0 / p);
  const Eigen::MatrixXd A = s.asDiagonal() * P * s.cwiseInverse().asDiagonal();
  const double q = p / (p - 1.0);
  auto dual_map = [](const Eigen::VectorXd& v, double r) -> Eigen::VectorXd {
    return v.unaryExpr([r](double x) { return std::copysign(std::pow(std::abs(x), r - 1.0), x); });
  };
  auto lp = [p](const Eigen::VectorXd& v) { return weighted_lp_norm(v, Eigen::VectorXd::Ones(v.size()), p); };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(A.cols());
  x /= lp(x);
  double best = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const Eigen::VectorXd y = A * x;
    const double est = lp(y);
    const bool stalled = est <= best * (1.0 + 1e-15);
    best = std::max(best, est);
    if (est == 0.0 || (stalled && it > 0)) break;
    const Eigen::VectorXd z = A.transpose() * dual_map(y / est, p);
    Eigen::VectorXd next = dual_map(z, q);
    const double nn = lp(next);
    if (nn == 0.0) break;
    x = next / nn;
  }
  out.norm = best;
  return out;
}

namespace {

double boundary_weight_of(const WeightedGraph& g, const std::vector<char>& in) {
  double acc = 0.0;
  for (const auto& e : g.edges()) {
    const Index iu = g.interior_position(e.u);
    const Index iv = g.interior_position(e.v);
    const bool a = iu >= 0 && in[static_cast<std::size_t>(iu)];
    const bool b = iv >= 0 && in[static_cast<std::size_t>(iv)];
    if (a != b) acc += e.mu;
  }
  return acc;
}

CheegerResult evaluate_set(const WeightedGraph& g, const std::vector<char>& in) {
  CheegerResult r;
  for (Index i = 0; i < g.num_interior(); ++i) {
    if (in[static_cast<std::size_t>(i)]) {
      r.witness.push_back(g.interior_vertex(i));
      r.volume += g.nu_interior()[i];
    }
  }
  r.boundary_weight = boundary_weight_of(g, in);
  r.h = r.boundary_weight / r.volume;
  return r;
}

}  // namespace

CheegerResult cheeger_exact(const WeightedGraph& g, Index cap) {
  const Index n = g.num_interior();
  if (n > cap || n > 62)
    throw std::invalid_argument("cheeger_exact: " + std::to_string(n) + " interior vertices exceed the enumeration cap " +
                                std::to_string(cap) + "; use cheeger_bounds");
  // interior adjacency as (position or -1, weight)
  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (const auto& nb : g.neighbors(g.interior_vertex(i)))
      adj[static_cast<std::size_t>(i)].emplace_back(g.interior_position(nb.vertex), nb.mu);

  using Mask = std::uint64_t;
  Mask mask = 0;
  double bw = 0.0;
  double vol = 0.0;
  Mask best_mask = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  auto to_set = [n](Mask m) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = (m >> i) & 1U;
    return in;
  };
  auto better = [&](Mask m, double r) {
    if (best_mask == 0) return true;
    const double tie = 1e-12 * std::max(1.0, best_ratio);
    if (r < best_ratio - tie) return true;
    if (r > best_ratio + tie) return false;
    const int sa = std::popcount(m);
    const int sb = std::popcount(best_mask);
    if (sa != sb) return sa < sb;
    const Mask diff = m ^ best_mask;
    return diff != 0 && (m & (diff & (~diff + 1))) != 0;
  };
  const Mask total = Mask{1} << n;
  for (Mask k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const Mask flag = Mask{1} << bit;
    const bool adding = (mask & flag) == 0;
    for (const auto& [j, mu] : adj[static_cast<std::size_t>(bit)]) {
      const bool other_in = j >= 0 && ((mask >> j) & 1U);
      bw += (other_in == adding) ? -mu : mu;
    }
    vol += adding ? g.nu_interior()[bit] : -g.nu_interior()[bit];
    mask ^= flag;
    const double approx = std::max(bw, 0.0) / vol;
    // incremental sums drift; recompute candidates near the incumbent exactly
    if (best_mask == 0 || approx <= best_ratio * (1.0 + 1e-9) + 1e-14) {
      const double exact = evaluate_set(g, to_set(mask)).h;
      if (better(mask, exact)) {
        best_mask = mask;
        best_ratio = exact;
      }
    }
  }
  return evaluate_set(g, to_set(best_mask));
}

CheegerBounds cheeger_bounds(const WeightedGraph& g, const SpectralDecomposition& dec) {
  CheegerBounds out;
  out.lower = dec.lambda(0);
  const Index n = g.num_interior();
  const Eigen::VectorXd phi = dec.eigenfunctions().col(0);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return phi[a] > phi[b]; });
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  out.upper.h = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; ++k) {
    in[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
    CheegerResult r = evaluate_set(g, in);
    if (r.h < out.upper.h) out.upper = std::move(r);
  }
  return out;
}

GapReport gap_report(const WeightedGraph& g, const SpectralDecomposition& dec, bool with_cheeger, Index cap) {
  GapReport r;
  r.bottom = dec.lambda(0);
  r.gap_above_zero = dec.gap_above_zero();
  r.M = bl_constant(g);
  r.kernel_dimension = dec.kernel_dimension();
  if (with_cheeger) r.cheeger = cheeger_exact(g, cap);
  return r;
}

}  // namespace graphriesz
