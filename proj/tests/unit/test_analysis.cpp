#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chaos/analysis.hpp"
#include "chaos/error.hpp"
#include "chaos/oracle.hpp"

using namespace chaos;

namespace {

const BasisSpec kTrig{BasisKind::Trigonometric, 1.0};
const BasisSpec kHaar{BasisKind::Haar, 1.0};

ToleranceSpec tight() {
  ToleranceSpec tol;
  tol.rtol = 1e-10;
  tol.atol = 1e-12;
  return tol;
}

// Hand-built solution on {0, e_1}: x_0 = 1 + t, x_{e1} = 2t.
ChaosSolution toy() {
  ChaosSolution sol{IndexSet({MultiIndex{}, MultiIndex::unit(1)}), {0.0, 0.5, 1.0}, {}, {}};
  for (double t : sol.grid) sol.coeffs.push_back({1.0 + t, 2.0 * t});
  return sol;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected chaos::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("moments of a hand-built solution") {
    const auto sol = toy();
    const auto m = moments(sol, 0.5);
    CHECK(m.mean == 1.5);
    CHECK(m.variance == 1.0);
    CHECK(moments_at(sol, 2).variance == 4.0);
    CHECK(grid_position(sol, 1.0) == 2);
    CHECK(code_of([&] { (void)moments(sol, 0.25); }) == ErrorCode::TimeNotOnGrid);
  }

  TEST_CASE("Brownian variance equals the partial KL sum") {
    const auto model = SdeModel::brownian_drift(0.3, 1.0, 0.0);
    const auto grid = uniform_grid(1.0, 11);
    for (auto basis : {kTrig, kHaar}) {
      const auto sol = solve(model, FullTruncation{2, 6}, basis, grid, tight());
      for (double t : grid) {
        CHECK(moments(sol, t).variance == doctest::Approx(kl_partial(basis, 6, t)).epsilon(1e-9));
        CHECK(moments(sol, t).mean == doctest::Approx(0.3 * t));
      }
    }
  }

  TEST_CASE("Haar p = 5, k = 2 variance at T") {
    const auto grid = uniform_grid(1.0, 3);
    const auto sol = solve(SdeModel::gbm(1, 1, 1), FullTruncation{5, 2}, kHaar, grid, tight());
    const double exact = gbm_variance_exact(1, 1, 1, 1.0);
    CHECK(exact == doctest::Approx(std::exp(2.0) * (std::numbers::e - 1.0)));
    CHECK(std::abs(moments(sol, 1.0).variance - exact) < 0.015);
  }

  TEST_CASE("gbm_variance_exact examples") {
    CHECK(gbm_variance_exact(0.5, 0.0, 3.0, 2.0) == 0.0);
    CHECK(gbm_variance_exact(0.0, 1.0, 1.0, 1e-12) == doctest::Approx(1e-12).epsilon(1e-9));
    CHECK(gbm_variance_exact(1.0, 1.0, 1.0, 0.0) == 0.0);
  }

  TEST_CASE("third moment") {
    const auto grid = uniform_grid(1.0, 5);
    const auto gbm = solve(SdeModel::gbm(1, 1, 1.5), FullTruncation{3, 3}, kTrig, grid, tight());
    CHECK(third_moment(gbm, 0.0) == doctest::Approx(3.375));
    // Gaussian case: E[X^3] = m^3 + 3 m v exactly.
    const auto bm = solve(SdeModel::brownian_drift(0.7, 1.2, 0.1), FullTruncation{3, 4}, kHaar, grid, tight());
    for (double t : grid) {
      const auto m = moments(bm, t);
      CHECK(third_moment(bm, t) == doctest::Approx(std::pow(m.mean, 3) + 3 * m.mean * m.variance));
    }
    const auto centred = solve(SdeModel::brownian_drift(0.0, 1.0, 0.0), FullTruncation{2, 4}, kTrig, grid, tight());
    CHECK(std::abs(third_moment(centred, 1.0)) < 1e-14);
  }

  TEST_CASE("third moment agrees with Monte Carlo on the same expansion") {
    const auto grid = uniform_grid(1.0, 3);
    const auto sol = solve(SdeModel::gbm(0.5, 0.6, 1.0), FullTruncation{3, 3}, kTrig, grid, tight());
    const auto mc = sample_expansion(sol, 1.0, 200'000, RngSpec{99, 0});
    CHECK(std::abs(mc.third_moment - third_moment(sol, 1.0)) <= 5 * mc.third_moment_se);
  }

  TEST_CASE("error_curve on a hand-built solution") {
    const auto sol = toy();
    const auto exact = [](double t) { return t; };
    const auto curve = error_curve(sol, exact);
    REQUIRE(curve.values.size() == 3);
    CHECK(curve.values[0] == 0.0);
    CHECK(curve.values[1] == doctest::Approx(0.5));
    CHECK(curve.values[2] == doctest::Approx(3.0));
    CHECK(curve.error_at_T == doctest::Approx(3.0));
    CHECK(curve.error_max == doctest::Approx(3.0));
    CHECK(curve.argmax == 2);
    CHECK(curve.approx[1] == 1.0);
    const std::vector<double> sub{0.0, 0.5};
    const auto part = error_curve(sol, exact, sub);
    CHECK(part.error_at_T == doctest::Approx(0.5));
    CHECK(part.argmax == 1);
    const std::vector<double> off{0.0, 0.3};
    CHECK(code_of([&] { (void)error_curve(sol, exact, off); }) == ErrorCode::TimeNotOnGrid);
  }

  TEST_CASE("bound_shape") {
    const double v = bound_shape(kTrig, 2, 8, 1.0, 2.0);
    CHECK(v == doctest::Approx(5.0 * (1.0 / 6.0 + tail_sum(kTrig, 8, 1.0))));
    CHECK(bound_shape(kHaar, 3, 4, 0.0, 0.0) == doctest::Approx(1.0 / 24.0));
    const double floor = 2.0 / 720.0;
    const double r = (bound_shape(kHaar, 5, 256, 1.0, 1.0) - floor) / (bound_shape(kHaar, 5, 128, 1.0, 1.0) - floor);
    CHECK(r == doctest::Approx(0.5).epsilon(0.16));
  }

  TEST_CASE("rate_fit") {
    std::vector<double> xs, ys;
    for (double x : {2.0, 4.0, 8.0, 16.0, 32.0}) {
      xs.push_back(x);
      ys.push_back(3.0 / (x * x));
    }
    const auto fit = rate_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(-2.0));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    ys[2] = 0.0;
    CHECK(code_of([&] { (void)rate_fit(xs, ys); }) == ErrorCode::NonPositiveValue);
    const std::vector<double> two{1.0, 2.0};
    CHECK(code_of([&] { (void)rate_fit(two, two); }) == ErrorCode::InvalidArgument);
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK(code_of([&] { (void)rate_fit(three, two); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("GBM variance grows towards the exact value with p") {
    const auto grid = uniform_grid(1.0, 3);
    const double exact = gbm_variance_exact(1, 1, 1, 1.0);
    double prev = 0.0;
    for (int p = 1; p <= 5; ++p) {
      const auto sol = solve(SdeModel::gbm(1, 1, 1), FullTruncation{p, 4}, kTrig, grid, tight());
      const double v = moments(sol, 1.0).variance;
      CHECK(v > prev);
      CHECK(v < exact);
      prev = v;
    }
  }

  TEST_CASE("Haar variance at T ignores finer levels") {
    // E_l(T) = 0 for every l >= 2, so only the first coordinate contributes at T.
    const auto grid = uniform_grid(1.0, 3);
    const auto coarse = solve(SdeModel::gbm(1, 1, 1), FullTruncation{3, 2}, kHaar, grid, tight());
    const auto fine = solve(SdeModel::gbm(1, 1, 1), FullTruncation{3, 8}, kHaar, grid, tight());
    CHECK(moments(coarse, 1.0).variance == doctest::Approx(moments(fine, 1.0).variance).epsilon(1e-8));
  }
}
