#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chaos/error.hpp"
#include "chaos/integrator.hpp"

using namespace chaos;

namespace {

void exp_rhs(double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; }

// Step cap lifted so the error reflects the tolerances alone.
double exp_error(double rtol, double atol) {
  ToleranceSpec tol;
  tol.rtol = rtol;
  tol.atol = atol;
  tol.max_step = 1.0;
  const std::vector<double> y0{1.0}, grid{1.0};
  const auto traj = integrate(exp_rhs, y0, 0.0, 1.0, grid, tol);
  return std::abs(traj.states[0][0] - std::numbers::e);
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("constant solution") {
    const std::vector<double> y0{3.5, -1.0}, grid{0.0, 0.3, 1.0};
    const auto traj = integrate([](double, std::span<const double>, std::span<double> dy) {
      dy[0] = dy[1] = 0.0;
    }, y0, 0.0, 1.0, grid);
    REQUIRE(traj.states.size() == 3);
    for (const auto& s : traj.states) {
      CHECK(s[0] == 3.5);
      CHECK(s[1] == -1.0);
    }
  }

  TEST_CASE("exponential at default tolerances") {
    const std::vector<double> y0{1.0}, grid{1.0};
    const auto traj = integrate(exp_rhs, y0, 0.0, 1.0, grid);
    CHECK(std::abs(traj.states[0][0] - std::numbers::e) / std::numbers::e <= 5e-4);
    CHECK(exp_error(1e-3, 1e-6) / std::numbers::e <= 5e-4);
  }

  TEST_CASE("harmonic oscillator returns after one period") {
    const std::vector<double> y0{1.0, 0.0};
    const double T = 2 * std::numbers::pi;
    const std::vector<double> grid{T};
    const auto traj = integrate([](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = -y[1];
      dy[1] = y[0];
    }, y0, 0.0, T, grid);
    CHECK(std::abs(traj.states[0][0] - 1.0) < 1e-3);
    CHECK(std::abs(traj.states[0][1]) < 1e-3);
  }

  TEST_CASE("error shrinks with the tolerance") {
    // Tolerance proportionality: the global error tracks the local error target.
    double prev = exp_error(1e-3, 1e-6);
    for (double rtol = 1e-4; rtol >= 1e-10; rtol /= 10) {
      const double err = exp_error(rtol, rtol * 1e-3);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-9);
  }

  TEST_CASE("halving both tolerances cuts the error at least 4x") {
    // Sweep-wide check: error(tol) / error(tol / 2) averaged in log space.
    double log_ratio = 0.0;
    int count = 0;
    for (double rtol = 1e-3; rtol >= 1e-8; rtol /= 4) {
      log_ratio += std::log(exp_error(rtol, rtol * 1e-3) / exp_error(rtol / 2, rtol * 5e-4));
      ++count;
    }
    const double mean_ratio = std::exp(log_ratio / count);
    MESSAGE("mean error reduction per tolerance halving: " << mean_ratio);
    CHECK(mean_ratio >= 4.0);
  }

  TEST_CASE("default step cap is a tenth of the span") {
    const std::vector<double> y0{1.0}, grid{1.0};
    const auto capped = integrate(exp_rhs, y0, 0.0, 1.0, grid);
    CHECK(capped.stats.accepted >= 10);
    ToleranceSpec loose;
    loose.max_step = 1.0;
    const auto free = integrate(exp_rhs, y0, 0.0, 1.0, grid, loose);
    CHECK(free.stats.accepted < capped.stats.accepted);
  }

  TEST_CASE("determinism") {
    const std::vector<double> y0{1.0, 0.5};
    std::vector<double> grid;
    for (int i = 0; i <= 50; ++i) grid.push_back(i / 50.0);
    auto rhs = [](double t, std::span<const double> y, std::span<double> dy) {
      dy[0] = std::sin(5 * t) * y[1];
      dy[1] = -y[0] + t;
    };
    const auto a = integrate(rhs, y0, 0.0, 1.0, grid);
    const auto b = integrate(rhs, y0, 0.0, 1.0, grid);
    CHECK(a.states == b.states);
    CHECK(a.stats.rhs_evaluations == b.stats.rhs_evaluations);
  }

  TEST_CASE("dense output passes through accepted step endpoints") {
    // With no output grid inside, a single huge first step is accepted; asking
    // for its endpoint must return the step value exactly.
    ToleranceSpec tol;
    tol.initial_step = 1.0;
    tol.max_step = 1.0;
    tol.rtol = 1.0;
    tol.atol = 1.0;
    const std::vector<double> y0{1.0};
    const std::vector<double> only_end{1.0}, with_mid{0.5, 1.0};
    const auto a = integrate(exp_rhs, y0, 0.0, 1.0, only_end, tol);
    const auto b = integrate(exp_rhs, y0, 0.0, 1.0, with_mid, tol);
    CHECK(a.stats.accepted == 1);
    CHECK(a.states[0][0] == b.states[1][0]);
    // Interpolant at theta = 1 reproduces y_new.
    CHECK(b.states[0][0] > 1.0);
  }

  TEST_CASE("breakpoints keep a jump in the RHS exact") {
    // y' = 1 on [0, 0.5), -1 on [0.5, 1]: a hat with peak 0.5 at t = 0.5.
    auto rhs = [](double t, std::span<const double>, std::span<double> dy) {
      dy[0] = t < 0.5 ? 1.0 : -1.0;
    };
    const std::vector<double> y0{0.0}, grid{0.25, 0.5, 0.75, 1.0}, jumps{0.5};
    const auto traj = integrate(rhs, y0, 0.0, 1.0, grid, {}, jumps);
    CHECK(traj.states[0][0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(traj.states[1][0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(traj.states[2][0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(traj.states[3][0]) < 1e-12);
  }

  TEST_CASE("errors") {
    const std::vector<double> y0{1.0}, grid{1.0};
    ToleranceSpec few;
    few.max_steps = 3;
    few.rtol = 1e-12;
    few.atol = 1e-14;
    try {
      (void)integrate(exp_rhs, y0, 0.0, 1.0, grid, few);
      FAIL("expected MaxStepsExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MaxStepsExceeded);
      CHECK(e.is_numerical());
    }
    // Finite-time blow-up: y' = y^2, y(0) = 1 explodes at t = 1.
    try {
      (void)integrate([](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; },
                      y0, 0.0, 2.0, std::vector<double>{2.0});
      FAIL("expected a numerical failure");
    } catch (const Error& e) {
      CHECK(e.is_numerical());
    }
    ToleranceSpec bad;
    bad.rtol = 0.0;
    CHECK_THROWS_AS(integrate(exp_rhs, y0, 0.0, 1.0, grid, bad), Error);
    ToleranceSpec bad_cap;
    bad_cap.max_step = 0.0;
    CHECK_THROWS_AS(integrate(exp_rhs, y0, 0.0, 1.0, grid, bad_cap), Error);
    CHECK_THROWS_AS(integrate(exp_rhs, y0, 0.0, 1.0, std::vector<double>{0.5, 0.2}), Error);
    CHECK_THROWS_AS(integrate(exp_rhs, y0, 0.0, 1.0, std::vector<double>{1.5}), Error);
  }
}
