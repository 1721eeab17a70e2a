#include "graphriesz/extremal.hpp"

#include "graphriesz/calculus.hpp"
#include "graphriesz/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace graphriesz {

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Function: return "f";
    case Quantity::MeanZeroPart: return "f_minus_mean";
    case Quantity::EdgeGradient: return "edge_gradient";
    case Quantity::VertexGradient: return "vertex_gradient";
    case Quantity::HalfLaplacian: return "half_laplacian";
    case Quantity::Laplacian: return "laplacian";
    case Quantity::HeatEdgeGradient: return "heat_edge_gradient";
  }
  return "?";
}

RatioFunctional riesz_edge(double p) {
  return {FunctionalId::RieszEdge, "riesz_edge", p, 0.0, 1.0, Constraint::None,
          {{Quantity::EdgeGradient, 1.0}, {Quantity::HalfLaplacian, -1.0}}};
}

RatioFunctional riesz_vertex(double p) {
  return {FunctionalId::RieszVertex, "riesz_vertex", p, 0.0, 1.0, Constraint::None,
          {{Quantity::VertexGradient, 1.0}, {Quantity::HalfLaplacian, -1.0}}};
}

RatioFunctional reverse_riesz(double p) {
  return {FunctionalId::ReverseRiesz, "reverse_riesz", p, 0.0, 1.0, Constraint::None,
          {{Quantity::HalfLaplacian, 1.0}, {Quantity::EdgeGradient, -1.0}}};
}

RatioFunctional mip(double p) {
  return {FunctionalId::MiP, "mip", p, 0.0, 1.0, Constraint::None,
          {{Quantity::EdgeGradient, 2.0}, {Quantity::Function, -1.0}, {Quantity::Laplacian, -1.0}}};
}

RatioFunctional mip_vertex(double p) {
  return {FunctionalId::MiPVertex, "mip_vertex", p, 0.0, 1.0, Constraint::None,
          {{Quantity::VertexGradient, 2.0}, {Quantity::Function, -1.0}, {Quantity::Laplacian, -1.0}}};
}

RatioFunctional gp(double p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gp functional needs t > 0");
  return {FunctionalId::GP, "gp", p, t, std::sqrt(t), Constraint::None,
          {{Quantity::HeatEdgeGradient, 1.0}, {Quantity::Function, -1.0}}};
}

RatioFunctional sobolev(double p) {
  RatioFunctional F{FunctionalId::SobolevP, "sobolev", p, 0.0, 1.0, Constraint::NonNegative,
                    {{Quantity::Function, 1.0}, {Quantity::EdgeGradient, -1.0}}};
  F.level_set_polish = p == 1.0;
  return F;
}

RatioFunctional norm_equiv(Quantity num, Quantity den, double p, Constraint constraint) {
  return {FunctionalId::NormEquiv, std::string("norm_equiv:") + quantity_name(num) + "/" + quantity_name(den), p, 0.0,
          1.0, constraint, {{num, 1.0}, {den, -1.0}}};
}

double quantity_norm(const WeightedGraph& g, const SpectralDecomposition& dec, Quantity q, double p, double t,
                     const Eigen::Ref<const Eigen::VectorXd>& f) {
  switch (q) {
    case Quantity::Function: return lp_norm_vertex(g, f, p);
    case Quantity::MeanZeroPart: {
      const Eigen::VectorXd full = g.extend(f).array() - nu_mean(g, f);
      return lp_norm_vertex(g, full, p);
    }
    case Quantity::EdgeGradient: return lp_norm_edge(g, diff_edge(g, f), p);
    case Quantity::VertexGradient: return lp_norm_vertex(g, grad_vertex(g, f), p);
    case Quantity::HalfLaplacian: return lp_norm_vertex(g, frac_power_apply(dec, f, 0.5), p);
    case Quantity::Laplacian: return lp_norm_vertex(g, laplacian_apply(g, f), p);
    case Quantity::HeatEdgeGradient: return lp_norm_edge(g, diff_edge(g, heat_apply(dec, f, t)), p);
  }
  throw std::logic_error("unknown quantity");
}

namespace {

double excluded_threshold(const WeightedGraph& g, double fnorm) {
  return 1e-11 * std::max(1.0, bl_constant(g)) * fnorm;
}

}  // namespace

double ratio_eval(const WeightedGraph& g, const SpectralDecomposition& dec, const RatioFunctional& F,
                  const Eigen::Ref<const Eigen::VectorXd>& f) {
  if (f.size() != g.num_interior()) throw std::invalid_argument("vertex function length mismatch");
  const double fnorm = lp_norm_vertex(g, f, F.p);
  if (fnorm == 0.0) throw ExcludedSubspace(F.name + ": zero function");
  const double floor = excluded_threshold(g, fnorm);
  double log_ratio = std::log(F.scale);
  for (const auto& [q, power] : F.factors) {
    const double n = quantity_norm(g, dec, q, F.p, F.t, f);
    if (power < 0.0 && n <= floor)
      throw ExcludedSubspace(F.name + ": " + quantity_name(q) + " vanishes on this function");
    log_ratio += power * std::log(n);
  }
  return std::exp(log_ratio);
}

Eigen::VectorXd apply_constraint(const WeightedGraph& g, Constraint c, const Eigen::Ref<const Eigen::VectorXd>& f) {
  switch (c) {
    case Constraint::None: return f;
    case Constraint::NonNegative: return f.cwiseAbs();
    case Constraint::MeanZero: {
      const double m = (f.array() * g.nu_interior().array()).sum() / g.nu_interior().sum();
      return f.array() - m;
    }
  }
  return f;
}

namespace {

// Images of f under each factor's linear map, with their p-th power sums,
// updated incrementally. A coordinate move only touches the rows where the
// moved column (or, under the mean-zero constraint, the image of the
// constants) is nonzero.
class DenseRatio {
 public:
  DenseRatio(const WeightedGraph& g, const SpectralDecomposition& dec, const RatioFunctional& F)
      : g_(g), F_(F), threshold_scale_(1e-11 * std::max(1.0, bl_constant(g))),
        incremental_(std::isfinite(F.p)), mean_zero_(F.constraint == Constraint::MeanZero) {
    const Index n = g.num_interior();
    const Eigen::MatrixXd D = difference_matrix(g);
    std::vector<Factor> factors = F.factors;
    // power 0 carries ||f||_p for the excluded-subspace floor
    factors.push_back({Quantity::Function, 0.0});
    for (const auto& factor : factors) {
      Term term;
      term.quantity = factor.quantity;
      term.power = factor.power;
      switch (factor.quantity) {
        case Quantity::Function:
          term.map = Eigen::MatrixXd::Identity(n, n);
          term.weights = g.nu_interior();
          break;
        case Quantity::MeanZeroPart: {
          Eigen::MatrixXd E = Eigen::MatrixXd::Zero(g.num_vertices(), n);
          for (Index i = 0; i < n; ++i) E(g.interior_vertex(i), i) = 1.0;
          const Eigen::RowVectorXd mean = g.nu().transpose() * E / g.nu().sum();
          term.map = E - Eigen::VectorXd::Ones(g.num_vertices()) * mean;
          term.weights = g.nu();
          break;
        }
        case Quantity::EdgeGradient:
          term.map = D;
          term.weights = g.edge_weights();
          break;
        case Quantity::VertexGradient:
          term.map = D;
          term.weights = g.nu();
          break;
        case Quantity::HalfLaplacian:
          term.map = frac_power_matrix(dec, 0.5);
          term.weights = g.nu_interior();
          break;
        case Quantity::Laplacian:
          term.map = laplacian_matrix(g);
          term.weights = g.nu_interior();
          break;
        case Quantity::HeatEdgeGradient:
          term.map = D * heat_matrix(dec, F.t);
          term.weights = g.edge_weights();
          break;
      }
      term.ones_image = term.map.rowwise().sum();
      const double scale = std::max(1.0, term.map.cwiseAbs().maxCoeff());
      for (Index r = 0; r < term.ones_image.size(); ++r)
        if (std::abs(term.ones_image[r]) <= 1e-14 * scale) term.ones_image[r] = 0.0;
      term.touched.resize(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) {
        auto& rows = term.touched[static_cast<std::size_t>(i)];
        for (Index r = 0; r < term.map.rows(); ++r)
          if (term.map(r, i) != 0.0 || (mean_zero_ && term.ones_image[r] != 0.0)) rows.push_back(r);
      }
      terms_.push_back(std::move(term));
    }
    scaled_nu_ = g.nu_interior().cwiseSqrt().cwiseInverse();
    mean_shift_ = g.nu_interior().cwiseSqrt() / g.nu_interior().sum();
    scratch_ = Eigen::VectorXd::Zero(g.num_vertices());
  }

  void set(const Eigen::VectorXd& f) {
    f_ = f;
    for (auto& t : terms_) {
      t.image = t.map * f;
      if (t.quantity == Quantity::VertexGradient) {
        t.sq = Eigen::VectorXd::Zero(g_.num_vertices());
        for (Index k = 0; k < g_.num_edges(); ++k) {
          const auto& e = g_.edges()[static_cast<std::size_t>(k)];
          const double c = e.mu * t.image[k] * t.image[k];
          t.sq[e.u] += c;
          t.sq[e.v] += c;
        }
      }
      if (incremental_) t.sum = power_sum(t);
    }
  }

  const Eigen::VectorXd& f() const { return f_; }

  // Ratio at the current images; -inf in the excluded subspace.
  double value() const {
    std::vector<double> norms;
    for (const auto& t : terms_) norms.push_back(incremental_ ? root(t.sum) : full_norm(t, t.image));
    return combine(norms);
  }

  // Ratio after moving coordinate y_i (nu-isotropic) by delta.
  double trial(Index i, double delta) const {
    const double s = delta * scaled_nu_[i];
    if (F_.constraint == Constraint::NonNegative && f_[i] + s < 0.0) return -std::numeric_limits<double>::infinity();
    const double m = mean_zero_ ? delta * mean_shift_[i] : 0.0;
    std::vector<double> norms;
    for (const auto& t : terms_) {
      if (incremental_) {
        norms.push_back(root(t.sum + sum_change(t, i, s, m)));
      } else {
        Eigen::VectorXd image = t.image + s * t.map.col(i);
        if (mean_zero_) image -= m * t.ones_image;
        norms.push_back(full_norm(t, image));
      }
    }
    return combine(norms);
  }

  void commit(Index i, double delta) {
    const double s = delta * scaled_nu_[i];
    const double m = mean_zero_ ? delta * mean_shift_[i] : 0.0;
    f_[i] += s;
    if (mean_zero_) f_.array() -= m;
    for (auto& t : terms_) {
      if (incremental_) t.sum += sum_change(t, i, s, m);
      if (t.quantity == Quantity::VertexGradient) {
        for (Index r : t.touched[static_cast<std::size_t>(i)]) {
          const auto& e = g_.edges()[static_cast<std::size_t>(r)];
          const double next = t.image[r] + s * t.map(r, i) - m * t.ones_image[r];
          const double c = e.mu * (next * next - t.image[r] * t.image[r]);
          t.sq[e.u] += c;
          t.sq[e.v] += c;
        }
      }
      for (Index r : t.touched[static_cast<std::size_t>(i)]) t.image[r] += s * t.map(r, i) - m * t.ones_image[r];
    }
  }

 private:
  struct Term {
    Quantity quantity;
    double power;
    Eigen::MatrixXd map;
    Eigen::VectorXd weights;
    Eigen::VectorXd ones_image;
    std::vector<std::vector<Index>> touched;
    Eigen::VectorXd image;
    Eigen::VectorXd sq;  // vertex gradient: sum_y mu_xy (df)^2 per vertex
    double sum = 0.0;    // sum of weighted p-th powers of the norm's entries
  };

  double power(double a) const {
    if (F_.p == 2.0) return a * a;
    if (F_.p == 1.0) return std::abs(a);
    return std::pow(std::abs(a), F_.p);
  }

  double vertex_power(Index x, double sq) const {
    const double q = std::max(sq, 0.0) / (2.0 * g_.nu()[x]);
    if (F_.p == 2.0) return g_.nu()[x] * q;
    return g_.nu()[x] * std::pow(q, 0.5 * F_.p);
  }

  double power_sum(const Term& t) const {
    double acc = 0.0;
    if (t.quantity == Quantity::VertexGradient) {
      for (Index x = 0; x < t.sq.size(); ++x) acc += vertex_power(x, t.sq[x]);
    } else {
      for (Index r = 0; r < t.image.size(); ++r) acc += t.weights[r] * power(t.image[r]);
    }
    return acc;
  }

  double sum_change(const Term& t, Index i, double s, double m) const {
    const auto& rows = t.touched[static_cast<std::size_t>(i)];
    double acc = 0.0;
    if (t.quantity == Quantity::VertexGradient) {
      std::vector<Index> hit;
      for (Index r : rows) {
        const auto& e = g_.edges()[static_cast<std::size_t>(r)];
        const double next = t.image[r] + s * t.map(r, i) - m * t.ones_image[r];
        const double c = e.mu * (next * next - t.image[r] * t.image[r]);
        for (Index x : {e.u, e.v}) {
          if (scratch_[x] == 0.0 && std::find(hit.begin(), hit.end(), x) == hit.end()) hit.push_back(x);
          scratch_[x] += c;
        }
      }
      for (Index x : hit) {
        acc += vertex_power(x, t.sq[x] + scratch_[x]) - vertex_power(x, t.sq[x]);
        scratch_[x] = 0.0;
      }
      return acc;
    }
    for (Index r : rows) {
      const double next = t.image[r] + s * t.map(r, i) - m * t.ones_image[r];
      acc += t.weights[r] * (power(next) - power(t.image[r]));
    }
    return acc;
  }

  double root(double sum) const {
    if (F_.p == 2.0) return std::sqrt(std::max(sum, 0.0));
    return std::pow(std::max(sum, 0.0), 1.0 / F_.p);
  }

  double full_norm(const Term& t, const Eigen::VectorXd& image) const {
    if (t.quantity == Quantity::VertexGradient) return weighted_lp_norm(grad_from_differences(g_, image), t.weights, F_.p);
    return weighted_lp_norm(image, t.weights, F_.p);
  }

  // norms in term order; the last term is ||f||_p
  double combine(const std::vector<double>& norms) const {
    const double fnorm = norms.back();
    if (fnorm == 0.0) return -std::numeric_limits<double>::infinity();
    const double floor = threshold_scale_ * fnorm;
    double log_ratio = std::log(F_.scale);
    for (std::size_t k = 0; k + 1 < terms_.size(); ++k) {
      if (terms_[k].power < 0.0 && norms[k] <= floor) return -std::numeric_limits<double>::infinity();
      log_ratio += terms_[k].power * std::log(norms[k]);
    }
    return std::exp(log_ratio);
  }

  const WeightedGraph& g_;
  const RatioFunctional& F_;
  double threshold_scale_;
  bool incremental_;
  bool mean_zero_;
  std::vector<Term> terms_;
  Eigen::VectorXd scaled_nu_;   // 1/sqrt(nu_i): f-step per unit y-step
  Eigen::VectorXd mean_shift_;  // sqrt(nu_i)/nu(V): mean correction per unit y-step
  Eigen::VectorXd f_;
  mutable Eigen::VectorXd scratch_;
};

double isotropic_norm(const WeightedGraph& g, const Eigen::VectorXd& f) {
  return std::sqrt((f.array().square() * g.nu_interior().array()).sum());
}

}  // namespace

ExtremalEstimate maximize_ratio(const WeightedGraph& g, const SpectralDecomposition& dec, const RatioFunctional& F,
                                const Budget& budget, std::uint64_t seed) {
  if (budget.restarts < 1) throw std::invalid_argument("budget needs at least one restart");
  if (F.constraint == Constraint::MeanZero && g.has_boundary())
    throw std::invalid_argument("mean-zero search is defined on graphs without boundary");
  const Index n = g.num_interior();
  DenseRatio dense(g, dec, F);
  ExtremalEstimate est;
  est.functional = F.name;
  est.p = F.p;
  est.t = F.t;
  est.seed = seed;
  est.best_ratio = -std::numeric_limits<double>::infinity();

  auto consider = [&](const Eigen::VectorXd& f, double value) {
    if (value > est.best_ratio) {
      est.best_ratio = value;
      est.witness = f / isotropic_norm(g, f);
    }
  };

  for (int r = 0; r < budget.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Eigen::VectorXd f(n);
    for (Index i = 0; i < n; ++i) f[i] = normal(rng) / std::sqrt(g.nu_interior()[i]);
    f = apply_constraint(g, F.constraint, f);
    const double norm0 = isotropic_norm(g, f);
    if (norm0 == 0.0) continue;
    dense.set(f / norm0);
    double current = dense.value();
    // per-coordinate steps: shrink on failure, grow back on success
    std::vector<double> step(static_cast<std::size_t>(n), budget.initial_step);
    auto largest = [&] { return *std::max_element(step.begin(), step.end()); };
    int sweep = 0;
    bool stalled = false;
    double checkpoint = current;
    while (!stalled && largest() >= budget.min_step && sweep < budget.max_sweeps) {
      ++sweep;
      for (Index i = 0; i < n; ++i) {
        double& s = step[static_cast<std::size_t>(i)];
        if (s < budget.min_step) continue;
        bool moved = false;
        for (double dir : {1.0, -1.0}) {
          const double v = dense.trial(i, dir * s);
          if (v > current + 1e-14 * std::abs(current)) {
            dense.commit(i, dir * s);
            current = v;
            moved = true;
            break;
          }
        }
        s = moved ? std::min(2.0 * s, budget.initial_step) : s * budget.shrink;
      }
      // recompute images from f so incremental updates do not drift
      dense.set(dense.f() / isotropic_norm(g, dense.f()));
      current = dense.value();
      // a coordinate whose step died may come back to life after others moved
      if (largest() < budget.min_step && sweep < budget.max_sweeps) {
        bool revived = false;
        for (Index i = 0; i < n && !revived; ++i)
          for (double dir : {1.0, -1.0})
            if (dense.trial(i, dir * budget.min_step) > current + 1e-14 * std::abs(current)) revived = true;
        if (revived) std::fill(step.begin(), step.end(), 64.0 * budget.min_step);
      }
      // relative gain below 1e-12 over a window of sweeps counts as converged
      if (sweep % 25 == 0) {
        stalled = current <= checkpoint + 1e-12 * std::abs(checkpoint);
        checkpoint = current;
      }
    }
    est.sweeps += sweep;
    ++est.restarts;
    if (stalled || largest() < budget.min_step) ++est.converged_restarts;
    consider(dense.f(), current);

    if (F.level_set_polish) {
      const Eigen::VectorXd local = dense.f();
      std::vector<double> levels(local.data(), local.data() + n);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      for (double s : levels) {
        if (s <= 0.0) continue;
        const Eigen::VectorXd indicator = (local.array() >= s).cast<double>();
        dense.set(indicator);
        consider(indicator, dense.value());
      }
    }
  }

  if (est.witness.size() == 0) throw std::runtime_error(F.name + ": no admissible start found");
  try {
    const double direct = ratio_eval(g, dec, F, est.witness);
    est.witness_consistent = std::abs(direct - est.best_ratio) <= 1e-9 * std::max(1.0, std::abs(direct));
    est.best_ratio = direct;
  } catch (const ExcludedSubspace&) {
    est.witness_consistent = false;
  }
  return est;
}

nlohmann::json to_json(const WeightedGraph& g, const ExtremalEstimate& est) {
  nlohmann::json j;
  j["functional"] = est.functional;
  j["p"] = std::isinf(est.p) ? nlohmann::json("inf") : nlohmann::json(est.p);
  if (est.t > 0.0) j["t"] = est.t;
  j["best_ratio"] = est.best_ratio;
  j["restarts"] = est.restarts;
  j["converged_restarts"] = est.converged_restarts;
  j["sweeps"] = est.sweeps;
  j["witness_consistent"] = est.witness_consistent;
  j["seed"] = est.seed;
  nlohmann::json ids = nlohmann::json::array();
  for (Index v : g.interior()) ids.push_back(g.id(v));
  j["witness_vertices"] = ids;
  j["witness"] = function_to_json(est.witness);
  return j;
}

}  // namespace graphriesz
