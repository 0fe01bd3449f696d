#include "chaos/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaos/error.hpp"
#include "chaos/hermite.hpp"

namespace chaos {

SdeModel SdeModel::gbm(double mu, double sigma, double x0) {
  SdeModel m;
  m.drift[1] = mu;
  m.diffusion[1] = sigma;
  m.x0 = x0;
  m.preset = GbmPreset{mu, sigma};
  return m;
}

SdeModel SdeModel::brownian_drift(double b, double sigma, double x0) {
  SdeModel m;
  m.drift[0] = b;
  m.diffusion[0] = sigma;
  m.x0 = x0;
  m.preset = BrownianDriftPreset{b, sigma};
  return m;
}

double SdeModel::drift_at(double t, double x) const {
  return drift[0](t) + x * (drift[1](t) + x * drift[2](t));
}

double SdeModel::diffusion_at(double t, double x) const {
  return diffusion[0](t) + x * (diffusion[1](t) + x * diffusion[2](t));
}

// ---------------------------------------------------------------------------

PropagatorSystem::PropagatorSystem(SdeModel model, IndexSet index_set, BasisSpec basis)
    : model_(std::move(model)), index_set_(std::move(index_set)), basis_(basis) {
  if (index_set_.size() == 0 || !index_set_[0].is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "index set must contain the zero index");
  }
  basis_count_ = index_set_.max_coordinate();

  const std::size_t n = index_set_.size();
  ladder_offsets_.reserve(n + 1);
  ladder_offsets_.push_back(0);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& alpha = index_set_[a];
    for (const auto& [coord, value] : alpha.entries()) {
      const auto source = index_set_.find(alpha.decrement(coord));
      if (source < 0) continue;
      ladder_.push_back({static_cast<std::size_t>(coord - 1), static_cast<std::size_t>(source),
                         std::sqrt(static_cast<double>(value))});
    }
    ladder_offsets_.push_back(ladder_.size());
  }

  if (!model_.is_affine()) {
    // Psi^beta Psi^gamma = sum_alpha T(alpha, beta, gamma) Psi^alpha, kept for alpha in the set.
    std::vector<std::vector<GalerkinTerm>> by_target(n);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t g = b; g < n; ++g) {
        const double mult = (b == g) ? 1.0 : 2.0;
        for (const auto& [alpha, w] : product_expansion(index_set_[b], index_set_[g])) {
          const auto target = index_set_.find(alpha);
          if (target >= 0) by_target[static_cast<std::size_t>(target)].push_back({b, g, mult * w});
        }
      }
    }
    galerkin_offsets_.reserve(n + 1);
    galerkin_offsets_.push_back(0);
    for (auto& terms : by_target) {
      galerkin_.insert(galerkin_.end(), terms.begin(), terms.end());
      galerkin_offsets_.push_back(galerkin_.size());
    }
  }
}

std::vector<double> PropagatorSystem::initial_state() const {
  std::vector<double> x(size(), 0.0);
  x[0] = model_.x0;
  return x;
}

std::span<const PropagatorSystem::LadderTerm> PropagatorSystem::ladder(
    std::size_t ordinal) const {
  return std::span<const LadderTerm>(ladder_).subspan(
      ladder_offsets_[ordinal], ladder_offsets_[ordinal + 1] - ladder_offsets_[ordinal]);
}

std::vector<std::size_t> PropagatorSystem::dependencies(std::size_t ordinal) const {
  std::vector<std::size_t> deps;
  for (const auto& term : ladder(ordinal)) deps.push_back(term.source);
  if (!galerkin_.empty()) {
    for (std::size_t i = galerkin_offsets_[ordinal]; i < galerkin_offsets_[ordinal + 1]; ++i) {
      deps.push_back(galerkin_[i].beta);
      deps.push_back(galerkin_[i].gamma);
    }
  }
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  std::erase(deps, ordinal);
  return deps;
}

class PropagatorRhs {
 public:
  explicit PropagatorRhs(std::shared_ptr<const PropagatorSystem> sys)
      : sys_(std::move(sys)),
        quad_(sys_->size(), 0.0),
        sigma_chaos_(sys_->size(), 0.0),
        e_values_(sys_->basis_count(), 0.0) {}

  void operator()(double t, std::span<const double> x, std::span<double> dx) {
    const auto& s = *sys_;
    const auto& m = s.model_;
    const std::size_t n = s.size();

    const double b0 = m.drift[0](t), b1 = m.drift[1](t), b2 = m.drift[2](t);
    const double g0 = m.diffusion[0](t), g1 = m.diffusion[1](t), g2 = m.diffusion[2](t);

    if (!s.galerkin_.empty()) {
      for (std::size_t a = 0; a < n; ++a) {
        double acc = 0.0;
        for (std::size_t i = s.galerkin_offsets_[a]; i < s.galerkin_offsets_[a + 1]; ++i) {
          const auto& term = s.galerkin_[i];
          acc += term.weight * x[term.beta] * x[term.gamma];
        }
        quad_[a] = acc;
      }
    }

    for (std::size_t a = 0; a < n; ++a) {
      dx[a] = b1 * x[a] + b2 * quad_[a];
      sigma_chaos_[a] = g1 * x[a] + g2 * quad_[a];
    }
    dx[0] += b0;
    sigma_chaos_[0] += g0;

    for (std::size_t j = 0; j < e_values_.size(); ++j) {
      e_values_[j] = eval_e(s.basis_, j + 1, t);
    }
    for (std::size_t a = 0; a < n; ++a) {
      double acc = 0.0;
      for (std::size_t i = s.ladder_offsets_[a]; i < s.ladder_offsets_[a + 1]; ++i) {
        const auto& term = s.ladder_[i];
        acc += term.weight * e_values_[term.basis] * sigma_chaos_[term.source];
      }
      dx[a] += acc;
    }
  }

 private:
  std::shared_ptr<const PropagatorSystem> sys_;
  std::vector<double> quad_;
  std::vector<double> sigma_chaos_;
  std::vector<double> e_values_;
};

RhsFunction PropagatorSystem::make_rhs() const {
  auto rhs = std::make_shared<PropagatorRhs>(std::make_shared<const PropagatorSystem>(*this));
  return [rhs](double t, std::span<const double> x, std::span<double> dx) { (*rhs)(t, x, dx); };
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double horizon, std::size_t points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  std::vector<double> grid(points);
  const double denom = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = horizon * static_cast<double>(i) / denom;
  }
  grid.back() = horizon;
  return grid;
}

ChaosSolution solve(const SdeModel& model, const IndexSet& index_set, const BasisSpec& basis,
                    std::span<const double> grid, const ToleranceSpec& tol) {
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "grid must start at 0 and have >= 2 points");
  }
  if (grid.back() > basis.horizon) {
    throw Error(ErrorCode::InvalidArgument, "grid extends past the basis horizon");
  }
  const PropagatorSystem system(model, index_set, basis);
  const auto rhs = system.make_rhs();
  const auto y0 = system.initial_state();
  const auto jumps = breakpoints(basis, std::max<std::size_t>(system.basis_count(), 1));
  auto traj = integrate(rhs, y0, 0.0, grid.back(), grid, tol, jumps);

  ChaosSolution sol;
  sol.index_set = index_set;
  sol.grid.assign(grid.begin(), grid.end());
  sol.coeffs = std::move(traj.states);
  sol.stats = traj.stats;
  return sol;
}

ChaosSolution solve(const SdeModel& model, const TruncationSpec& spec, const BasisSpec& basis,
                    std::span<const double> grid, const ToleranceSpec& tol) {
  return solve(model, enumerate(spec), basis, grid, tol);
}

double closed_form_gbm(const SdeModel& model, const MultiIndex& alpha, const BasisSpec& basis,
                       double t) {
  const auto* gbm = std::get_if<GbmPreset>(&model.preset);
  if (!gbm) throw Error(ErrorCode::NotGbm, "closed form needs the GBM preset");
  double value = model.x0 * std::exp(gbm->mu * t) *
                 std::pow(gbm->sigma, static_cast<double>(alpha.order())) /
                 std::sqrt(static_cast<double>(alpha.factorial()));
  for (const auto& [coord, power] : alpha.entries()) {
    value *= std::pow(eval_E(basis, coord, t), static_cast<double>(power));
  }
  return value;
}

double closed_form_bm(const SdeModel& model, const MultiIndex& alpha, const BasisSpec& basis,
                      double t) {
  const auto* bm = std::get_if<BrownianDriftPreset>(&model.preset);
  if (!bm) throw Error(ErrorCode::NotBm, "closed form needs the Brownian-with-drift preset");
  if (alpha.is_zero()) return model.x0 + bm->b * t;
  if (alpha.order() == 1) return bm->sigma * eval_E(basis, alpha.max_coordinate(), t);
  return 0.0;
}

}  // namespace chaos
