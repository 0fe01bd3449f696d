#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "chaos/basis.hpp"
#include "chaos/integrator.hpp"
#include "chaos/multiindex.hpp"

namespace chaos {

/// Real coefficient function of time. Default-constructed is identically zero.
/// Callables must be bounded on [0, T]; nothing here checks it.
class TimeFunction {
 public:
  TimeFunction() = default;
  TimeFunction(double constant) : constant_(constant) {}  // NOLINT: implicit on purpose
  explicit TimeFunction(std::function<double(double)> f) : fn_(std::move(f)) {}

  double operator()(double t) const { return fn_ ? fn_(t) : constant_; }
  bool is_zero() const noexcept { return !fn_ && constant_ == 0.0; }

 private:
  double constant_ = 0.0;
  std::function<double(double)> fn_;
};

struct GbmPreset {
  double mu = 0.0;
  double sigma = 0.0;
};

struct BrownianDriftPreset {
  double b = 0.0;
  double sigma = 0.0;
};

/// dX = b(t, X) dt + sigma(t, X) dW with
/// b = drift[0] + drift[1] x + drift[2] x^2 and likewise for sigma.
struct SdeModel {
  std::array<TimeFunction, 3> drift;
  std::array<TimeFunction, 3> diffusion;
  double x0 = 0.0;
  std::variant<std::monostate, GbmPreset, BrownianDriftPreset> preset;

  static SdeModel gbm(double mu, double sigma, double x0);
  static SdeModel brownian_drift(double b, double sigma, double x0);

  double drift_at(double t, double x) const;
  double diffusion_at(double t, double x) const;
  bool is_affine() const noexcept { return drift[2].is_zero() && diffusion[2].is_zero(); }
};

/// Coefficient trajectories x_alpha(t_m) on a time grid.
struct ChaosSolution {
  IndexSet index_set;
  std::vector<double> grid;
  /// coeffs[m][j] = x_{alpha_j}(grid[m]).
  std::vector<std::vector<double>> coeffs;
  IntegratorStats stats;
};

/// The propagator ODE system for one (model, index set, basis) triple.
///
///   x'_alpha = b_alpha + sum_j sqrt(alpha_j) e_j(t) sigma_{alpha^-(j)},
///   x_alpha(0) = x0 1{alpha = 0},
///
/// where b_alpha, sigma_alpha are the chaos coefficients of b(t, X^trunc) and
/// sigma(t, X^trunc). Quadratic terms are Galerkin-projected onto the index
/// set through E[Psi^beta Psi^gamma Psi^alpha]; products landing outside the
/// set are dropped. If alpha^-(j) is not in the set (possible for
/// second-order sparse sets) its coefficient is taken as zero.
class PropagatorSystem {
 public:
  struct LadderTerm {
    std::size_t basis;   // 0-based basis index j - 1
    std::size_t source;  // ordinal of alpha^-(j)
    double weight;       // sqrt(alpha_j)
  };

  struct GalerkinTerm {
    std::size_t beta;
    std::size_t gamma;
    double weight;  // includes the factor 2 for beta != gamma
  };

  PropagatorSystem(SdeModel model, IndexSet index_set, BasisSpec basis);

  std::size_t size() const noexcept { return index_set_.size(); }
  const IndexSet& index_set() const noexcept { return index_set_; }
  const SdeModel& model() const noexcept { return model_; }
  const BasisSpec& basis() const noexcept { return basis_; }
  /// Number of basis functions the system touches (largest coordinate used).
  std::size_t basis_count() const noexcept { return basis_count_; }

  std::vector<double> initial_state() const;

  /// Builds an RHS closure with its own scratch buffers.
  RhsFunction make_rhs() const;

  /// Ordinals whose values enter x'_alpha (excluding alpha itself), sorted.
  std::vector<std::size_t> dependencies(std::size_t ordinal) const;

  std::span<const LadderTerm> ladder(std::size_t ordinal) const;
  std::size_t galerkin_nonzeros() const noexcept { return galerkin_.size(); }

 private:
  friend class PropagatorRhs;

  SdeModel model_;
  IndexSet index_set_;
  BasisSpec basis_;
  std::size_t basis_count_ = 0;
  std::vector<std::size_t> ladder_offsets_;
  std::vector<LadderTerm> ladder_;
  std::vector<std::size_t> galerkin_offsets_;
  std::vector<GalerkinTerm> galerkin_;
};

/// T * i / (points - 1) for i = 0..points-1.
std::vector<double> uniform_grid(double horizon, std::size_t points);

/// Integrates the propagator system and samples it on `grid`
/// (strictly increasing, grid.front() == 0, grid.back() <= basis.horizon).
ChaosSolution solve(const SdeModel& model, const IndexSet& index_set, const BasisSpec& basis,
                    std::span<const double> grid, const ToleranceSpec& tol = {});
ChaosSolution solve(const SdeModel& model, const TruncationSpec& spec, const BasisSpec& basis,
                    std::span<const double> grid, const ToleranceSpec& tol = {});

/// x_alpha(t) = x0 sigma^|alpha| e^{mu t} prod_j E_j(t)^{alpha_j} / sqrt(alpha!).
double closed_form_gbm(const SdeModel& model, const MultiIndex& alpha, const BasisSpec& basis,
                       double t);

/// x_0(t) = x0 + b t, x_{e_j}(t) = sigma E_j(t), zero for |alpha| >= 2.
double closed_form_bm(const SdeModel& model, const MultiIndex& alpha, const BasisSpec& basis,
                      double t);

}  // namespace chaos
