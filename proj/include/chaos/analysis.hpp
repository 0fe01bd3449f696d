#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "chaos/basis.hpp"
#include "chaos/propagator.hpp"

namespace chaos {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Position of `t` in sol.grid (exact match). Throws TimeNotOnGrid.
std::size_t grid_position(const ChaosSolution& sol, double t);

/// mean = x_0(t), variance = sum_{alpha != 0} x_alpha(t)^2.
Moments moments(const ChaosSolution& sol, double t);
Moments moments_at(const ChaosSolution& sol, std::size_t position);

/// E[(X^trunc_t)^3] = sum x_alpha x_beta x_gamma E[Psi^alpha Psi^beta Psi^gamma].
double third_moment(const ChaosSolution& sol, double t);

/// x0^2 e^{2 mu t} (e^{sigma^2 t} - 1).
double gbm_variance_exact(double mu, double sigma, double x0, double t);

struct ErrorCurve {
  std::vector<double> grid;
  std::vector<double> exact;
  std::vector<double> approx;
  /// |exact - approx| per grid point.
  std::vector<double> values;
  double error_at_T = 0.0;
  double error_max = 0.0;
  std::size_t argmax = 0;
};

/// Pointwise variance error on `grid`, which must be a subset of sol.grid.
ErrorCurve error_curve(const ChaosSolution& sol, const std::function<double(double)>& exact_variance,
                       std::span<const double> grid);
/// Same, on the full solution grid.
ErrorCurve error_curve(const ChaosSolution& sol, const std::function<double(double)>& exact_variance);

/// (1 + x0^2) (1/(p+1)! + tail_sum(basis, k, t)): the error-bound bracket
/// with unit constant. Only meaningful for rate comparisons.
double bound_shape(const BasisSpec& basis, int p, std::size_t k, double t, double x0);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (log x, log y). Needs >= 3 points, all positive.
RateFit rate_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace chaos
