#pragma once

#include <cstddef>
#include <span>

#include "chaos/basis.hpp"
#include "chaos/propagator.hpp"
#include "chaos/rng.hpp"

namespace chaos {

/// Sample moments with standard errors. The variance SE uses the sample
/// fourth central moment; the third-moment SE uses the sample sixth moment.
struct SampleStats {
  std::size_t paths = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;  // unbiased
  double variance_se = 0.0;
  double third_moment = 0.0;  // raw E[X^3]
  double third_moment_se = 0.0;
};

/// Paths are simulated in fixed-size chunks and reduced in chunk order, so
/// results do not depend on the thread count.
inline constexpr std::size_t kPathChunk = 4096;

/// Draws xi ~ N(0, I_k) and evaluates sum_alpha x_alpha(t) Psi^alpha(xi).
SampleStats sample_expansion(const ChaosSolution& sol, double t, std::size_t n_paths,
                             const RngSpec& rng);

/// Euler-Maruyama on the uniform grid of [0, horizon]; statistics of X_T.
SampleStats euler_maruyama(const SdeModel& model, double horizon, std::size_t n_steps,
                           std::size_t n_paths, const RngSpec& rng);

struct KlPathCheck {
  /// max_t |sample E[Y_t^2] - kl_partial(k, t)| with Y_t = sum_{l<=k} E_l(t) xi_l.
  double max_abs_deviation = 0.0;
  /// Same deviation divided by its standard error, maximised over t.
  double max_standardized = 0.0;
};

KlPathCheck kl_path_check(const BasisSpec& basis, std::size_t k, std::span<const double> t_grid,
                          std::size_t n_paths, const RngSpec& rng);

}  // namespace chaos
