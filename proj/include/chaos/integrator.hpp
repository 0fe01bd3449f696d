#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace chaos {

/// Error control for the Dormand-Prince 5(4) integrator. The defaults are
/// common ode45-style solver defaults, including the step
/// cap of one tenth of the integration span when max_step is unset.
struct ToleranceSpec {
  double rtol = 1e-3;
  double atol = 1e-6;
  std::size_t max_steps = 10'000'000;
  std::optional<double> initial_step;
  std::optional<double> max_step;
};

/// dydt = f(t, y); must not resize its arguments.
using RhsFunction =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  IntegratorStats stats;
};

/// Integrates y' = f(t, y) from t0 to t1 and samples the solution at
/// `output_grid` (increasing, inside [t0, t1]) using the 4th-order dense
/// output of the Dormand-Prince pair.
///
/// `breakpoints` lists times where f is discontinuous. Steps never cross
/// them, the RHS is re-evaluated after each one, and stages that land on a
/// breakpoint sample f from the left.
///
/// Throws Error(StepSizeUnderflow) or Error(MaxStepsExceeded).
Trajectory integrate(const RhsFunction& rhs, std::span<const double> y0, double t0,
                     double t1, std::span<const double> output_grid,
                     const ToleranceSpec& tol = {},
                     std::span<const double> breakpoints = {});

}  // namespace chaos
