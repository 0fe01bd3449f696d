#include "chaos/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaos/error.hpp"
#include "chaos/hermite.hpp"

namespace chaos {

std::size_t grid_position(const ChaosSolution& sol, double t) {
  const auto it = std::lower_bound(sol.grid.begin(), sol.grid.end(), t);
  if (it == sol.grid.end() || *it != t) {
    throw Error(ErrorCode::TimeNotOnGrid, "t = " + std::to_string(t) + " is not a grid point");
  }
  return static_cast<std::size_t>(it - sol.grid.begin());
}

Moments moments_at(const ChaosSolution& sol, std::size_t position) {
  const auto& x = sol.coeffs.at(position);
  Moments m;
  m.mean = x.at(0);
  for (std::size_t j = 1; j < x.size(); ++j) m.variance += x[j] * x[j];
  return m;
}

Moments moments(const ChaosSolution& sol, double t) {
  return moments_at(sol, grid_position(sol, t));
}

double third_moment(const ChaosSolution& sol, double t) {
  const auto& x = sol.coeffs[grid_position(sol, t)];
  const auto& set = sol.index_set;
  // Expand Psi^beta Psi^gamma once per unordered pair and pair it with x_alpha.
  double total = 0.0;
  for (std::size_t b = 0; b < set.size(); ++b) {
    if (x[b] == 0.0) continue;
    for (std::size_t g = b; g < set.size(); ++g) {
      if (x[g] == 0.0) continue;
      double inner = 0.0;
      for (const auto& [alpha, w] : product_expansion(set[b], set[g])) {
        const auto a = set.find(alpha);
        if (a >= 0) inner += w * x[static_cast<std::size_t>(a)];
      }
      total += (b == g ? 1.0 : 2.0) * x[b] * x[g] * inner;
    }
  }
  return total;
}

double gbm_variance_exact(double mu, double sigma, double x0, double t) {
  return x0 * x0 * std::exp(2.0 * mu * t) * std::expm1(sigma * sigma * t);
}

ErrorCurve error_curve(const ChaosSolution& sol,
                       const std::function<double(double)>& exact_variance,
                       std::span<const double> grid) {
  ErrorCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.exact.reserve(grid.size());
  curve.approx.reserve(grid.size());
  curve.values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = exact_variance(grid[i]);
    const double approx = moments(sol, grid[i]).variance;
    const double err = std::abs(exact - approx);
    curve.exact.push_back(exact);
    curve.approx.push_back(approx);
    curve.values.push_back(err);
    if (err > curve.error_max) {
      curve.error_max = err;
      curve.argmax = i;
    }
  }
  if (!curve.values.empty()) curve.error_at_T = curve.values.back();
  return curve;
}

ErrorCurve error_curve(const ChaosSolution& sol,
                       const std::function<double(double)>& exact_variance) {
  return error_curve(sol, exact_variance, sol.grid);
}

double bound_shape(const BasisSpec& basis, int p, std::size_t k, double t, double x0) {
  if (p < 0) throw Error(ErrorCode::InvalidArgument, "p must be >= 0");
  const double inv_fact = std::exp(-std::lgamma(p + 2.0));
  return (1.0 + x0 * x0) * (inv_fact + tail_sum(basis, k, t));
}

RateFit rate_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::DimensionMismatch, "xs and ys differ in length");
  if (xs.size() < 3) throw Error(ErrorCode::InvalidArgument, "rate_fit needs at least 3 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, "rate_fit needs positive data");
    }
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double cxx = sxx - sx * sx / n;
  const double cxy = sxy - sx * sy / n;
  const double cyy = syy - sy * sy / n;
  if (cxx <= 0.0) throw Error(ErrorCode::InvalidArgument, "xs must not all be equal");
  RateFit fit;
  fit.slope = cxy / cxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
  return fit;
}

}  // namespace chaos
