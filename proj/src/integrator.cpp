#include "chaos/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chaos/error.hpp"

namespace chaos {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense output (Hairer & Wanner, DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

class Stepper {
 public:
  Stepper(const RhsFunction& rhs, std::size_t n, const ToleranceSpec& tol)
      : rhs_(rhs), tol_(tol), n_(n),
        k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n), ynew_(n),
        r1_(n), r2_(n), r3_(n), r4_(n), r5_(n) {}

  void eval(double t, std::span<const double> y, std::vector<double>& out) {
    rhs_(t, y, out);
    ++stats.rhs_evaluations;
  }

  double rms_error(std::span<const double> y) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      const double err = tmp_[i] / sk;
      sum += err * err;
    }
    return n_ == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n_));
  }

  // Initial step guess; the probe point stays inside [t, t + hmax].
  double initial_step(double t, std::span<const double> y, double hmax) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = tol_.atol + tol_.rtol * std::abs(y[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    const double nn = std::max<double>(1.0, static_cast<double>(n_));
    dnf /= nn;
    dny /= nn;
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * k1_[i];
    eval(t + h, tmp_, k2_);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = tol_.atol + tol_.rtol * std::abs(y[i]);
      const double d = (k2_[i] - k1_[i]) / sk;
      der2 += d * d;
    }
    der2 = std::sqrt(der2 / nn) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
  }

  // One trial step from (t, y) with k1_ = f(t, y). `stage_cap` is the latest
  // time at which stages may sample f.
  double attempt(double t, double h, std::span<const double> y, double t_new,
                 double stage_cap) {
    auto at = [stage_cap](double s) { return std::min(s, stage_cap); };
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
    eval(at(t + c2 * h), tmp_, k2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(at(t + c3 * h), tmp_, k3_);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    eval(at(t + c4 * h), tmp_, k4_);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    eval(at(t + c5 * h), tmp_, k5_);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                            a65 * k5_[i]);
    }
    eval(at(t_new), tmp_, k6_);
    for (std::size_t i = 0; i < n_; ++i) {
      ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                             a76 * k6_[i]);
    }
    eval(at(t_new), ynew_, k7_);
    for (std::size_t i = 0; i < n_; ++i) {
      tmp_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                     e7 * k7_[i]);
    }
    return rms_error(y);
  }

  void prepare_dense(std::span<const double> y, double h) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double dy = ynew_[i] - y[i];
      const double bspl = h * k1_[i] - dy;
      r1_[i] = y[i];
      r2_[i] = dy;
      r3_[i] = bspl;
      r4_[i] = dy - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                    d7 * k7_[i]);
    }
  }

  void dense(double theta, std::vector<double>& out) const {
    const double theta1 = 1.0 - theta;
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      out[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
    }
  }

  const RhsFunction& rhs_;
  const ToleranceSpec& tol_;
  std::size_t n_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
  std::vector<double> r1_, r2_, r3_, r4_, r5_;
  IntegratorStats stats;
};

}  // namespace

Trajectory integrate(const RhsFunction& rhs, std::span<const double> y0, double t0,
                     double t1, std::span<const double> output_grid,
                     const ToleranceSpec& tol, std::span<const double> breakpoints) {
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rtol and atol must be positive");
  }
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "need t1 > t0");
  if (tol.max_step && !(*tol.max_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_step must be positive");
  }
  const double hmax = tol.max_step.value_or(0.1 * (t1 - t0));
  for (std::size_t i = 0; i < output_grid.size(); ++i) {
    if (output_grid[i] < t0 || output_grid[i] > t1) {
      throw Error(ErrorCode::InvalidArgument, "output time outside integration span");
    }
    if (i > 0 && !(output_grid[i] > output_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "output grid must be strictly increasing");
    }
  }

  std::vector<double> bounds{t0};
  for (double b : breakpoints) {
    if (b > t0 && b < t1 && b > bounds.back()) bounds.push_back(b);
  }
  bounds.push_back(t1);

  const std::size_t n = y0.size();
  Trajectory traj;
  traj.times.assign(output_grid.begin(), output_grid.end());
  traj.states.reserve(output_grid.size());

  std::vector<double> y(y0.begin(), y0.end());
  std::size_t next_out = 0;
  while (next_out < output_grid.size() && output_grid[next_out] == t0) {
    traj.states.push_back(y);
    ++next_out;
  }

  Stepper st(rhs, n, tol);
  double h = std::min(tol.initial_step.value_or(0.0), hmax);
  std::size_t steps = 0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
    const double a = bounds[seg];
    const double b = bounds[seg + 1];
    const bool jump_at_end = seg + 2 < bounds.size();
    const double stage_cap = jump_at_end ? std::nextafter(b, a) : b;

    double t = a;
    st.eval(t, y, st.k1_);
    if (h <= 0.0) h = st.initial_step(t, y, std::min(b - a, hmax));
    bool last_rejected = false;

    while (t < b) {
      if (++steps > tol.max_steps) {
        throw Error(ErrorCode::MaxStepsExceeded,
                    "exceeded " + std::to_string(tol.max_steps) + " steps at t = " +
                        std::to_string(t));
      }
      if (h < 16.0 * eps * std::max(std::abs(t), 1e-300)) {
        throw Error(ErrorCode::StepSizeUnderflow,
                    "step size underflow at t = " + std::to_string(t));
      }
      // h is the step the controller wants; h_try may be cut to land on b.
      const bool hits_end = t + 1.01 * h >= b;
      const double h_try = hits_end ? b - t : h;
      const double t_new = hits_end ? b : t + h_try;

      const double err = st.attempt(t, h_try, y, t_new, stage_cap);
      if (err <= 1.0) {
        ++st.stats.accepted;
        st.prepare_dense(y, h_try);
        while (next_out < output_grid.size() && output_grid[next_out] <= t_new) {
          const double tau = output_grid[next_out];
          if (tau == t_new) {
            traj.states.push_back(st.ynew_);
          } else {
            std::vector<double> out;
            st.dense((tau - t) / h_try, out);
            traj.states.push_back(std::move(out));
          }
          ++next_out;
        }
        y.swap(st.ynew_);
        st.k1_.swap(st.k7_);
        t = t_new;
        double factor = err == 0.0 ? kMaxFactor : kSafety * std::pow(err, -0.2);
        factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
        const double proposed = h_try * factor;
        h = std::min(hits_end ? std::max(proposed, h) : proposed, hmax);
        last_rejected = false;
      } else {
        ++st.stats.rejected;
        h = h_try * std::max(kMinFactor, kSafety * std::pow(err, -0.2));
        last_rejected = true;
      }
    }
  }

  traj.stats = st.stats;
  return traj;
}

}  // namespace chaos
