#include "chaos/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "chaos/analysis.hpp"
#include "chaos/error.hpp"
#include "chaos/hermite.hpp"
#include "chaos/parallel.hpp"

namespace chaos {

namespace {

// Power sums of (x - shift)^m, m = 1..6.
using PowerSums = std::array<double, 6>;

void accumulate(PowerSums& s, double d) {
  double p = d;
  for (auto& v : s) {
    v += p;
    p *= d;
  }
}

// Pairwise reduction in index order; keeps rounding independent of scheduling.
PowerSums reduce(std::span<const PowerSums> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const auto half = parts.size() / 2;
  auto a = reduce(parts.first(half));
  const auto b = reduce(parts.subspan(half));
  for (std::size_t m = 0; m < a.size(); ++m) a[m] += b[m];
  return a;
}

template <class PathFn>
PowerSums run_chunks(std::size_t n_paths, PathFn&& chunk_fn) {
  const std::size_t chunks = (n_paths + kPathChunk - 1) / kPathChunk;
  std::vector<PowerSums> parts(chunks, PowerSums{});
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kPathChunk;
    const std::size_t end = std::min(n_paths, begin + kPathChunk);
    chunk_fn(begin, end, parts[c]);
  });
  return reduce(parts);
}

SampleStats finish(const PowerSums& sums, std::size_t n_paths, double shift) {
  const double n = static_cast<double>(n_paths);
  // Shifted raw moments mu'_0..mu'_6.
  std::array<double, 7> mp{1.0};
  for (std::size_t m = 0; m < 6; ++m) mp[m + 1] = sums[m] / n;

  const double d = mp[1];
  const double m2 = mp[2] - d * d;
  const double m4 = mp[4] - 4 * d * mp[3] + 6 * d * d * mp[2] - 3 * d * d * d * d;

  auto raw = [&](int j) {
    double acc = 0.0, binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      acc += binom * std::pow(shift, j - i) * mp[static_cast<std::size_t>(i)];
      binom = binom * (j - i) / (i + 1);
    }
    return acc;
  };

  SampleStats st;
  st.paths = n_paths;
  st.mean = shift + d;
  st.mean_se = std::sqrt(std::max(m2, 0.0) / n);
  st.variance = n > 1 ? m2 * n / (n - 1) : 0.0;
  st.variance_se = n > 3 ? std::sqrt(std::max(m4 - m2 * m2 * (n - 3) / (n - 1), 0.0) / n) : 0.0;
  st.third_moment = raw(3);
  st.third_moment_se = std::sqrt(std::max(raw(6) - st.third_moment * st.third_moment, 0.0) / n);
  return st;
}

void check_paths(std::size_t n_paths) {
  if (n_paths < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 paths");
  if (n_paths > 0xFFFFFFFFull) throw Error(ErrorCode::InvalidArgument, "too many paths");
}

}  // namespace

SampleStats sample_expansion(const ChaosSolution& sol, double t, std::size_t n_paths,
                             const RngSpec& rng) {
  check_paths(n_paths);
  const auto& x = sol.coeffs[grid_position(sol, t)];
  const auto& set = sol.index_set;
  const std::size_t k = set.max_coordinate();
  const int pmax = set.max_order();

  // Flattened (coordinate, order) lists per index, zero coefficients skipped.
  std::vector<double> weight;
  std::vector<std::size_t> offsets{0};
  std::vector<std::pair<std::size_t, int>> factors;
  for (std::size_t a = 0; a < set.size(); ++a) {
    if (x[a] == 0.0) continue;
    weight.push_back(x[a]);
    for (const auto& [coord, order] : set[a].entries()) {
      factors.emplace_back(coord - 1, static_cast<int>(order));
    }
    offsets.push_back(factors.size());
  }
  const double shift = x[0];
  const std::size_t stride = static_cast<std::size_t>(pmax) + 1;

  const auto sums = run_chunks(n_paths, [&](std::size_t begin, std::size_t end, PowerSums& acc) {
    std::vector<double> table(k * stride);
    for (std::size_t path = begin; path < end; ++path) {
      NormalStream normals(rng, static_cast<std::uint32_t>(path));
      for (std::size_t i = 0; i < k; ++i) {
        hermite_all(pmax, normals.next(), std::span<double>(table).subspan(i * stride, stride));
      }
      double value = 0.0;
      for (std::size_t a = 0; a < weight.size(); ++a) {
        double term = weight[a];
        for (std::size_t f = offsets[a]; f < offsets[a + 1]; ++f) {
          term *= table[factors[f].first * stride + static_cast<std::size_t>(factors[f].second)];
        }
        value += term;
      }
      accumulate(acc, value - shift);
    }
  });
  return finish(sums, n_paths, shift);
}

SampleStats euler_maruyama(const SdeModel& model, double horizon, std::size_t n_steps,
                           std::size_t n_paths, const RngSpec& rng) {
  check_paths(n_paths);
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "need at least 1 step");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");

  const double dt = horizon / static_cast<double>(n_steps);
  const double sqrt_dt = std::sqrt(dt);
  // Coefficients frozen at the left end of each step.
  std::vector<std::array<double, 6>> coef(n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    const double t = horizon * static_cast<double>(s) / static_cast<double>(n_steps);
    coef[s] = {model.drift[0](t) * dt,     model.drift[1](t) * dt,
               model.drift[2](t) * dt,     model.diffusion[0](t) * sqrt_dt,
               model.diffusion[1](t) * sqrt_dt, model.diffusion[2](t) * sqrt_dt};
  }
  const double shift = model.x0;

  const auto sums = run_chunks(n_paths, [&](std::size_t begin, std::size_t end, PowerSums& acc) {
    for (std::size_t path = begin; path < end; ++path) {
      NormalStream normals(rng, static_cast<std::uint32_t>(path));
      double xv = model.x0;
      for (const auto& c : coef) {
        const double z = normals.next();
        xv += (c[0] + xv * (c[1] + xv * c[2])) + (c[3] + xv * (c[4] + xv * c[5])) * z;
      }
      accumulate(acc, xv - shift);
    }
  });
  return finish(sums, n_paths, shift);
}

KlPathCheck kl_path_check(const BasisSpec& basis, std::size_t k, std::span<const double> t_grid,
                          std::size_t n_paths, const RngSpec& rng) {
  check_paths(n_paths);
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const std::size_t nt = t_grid.size();
  std::vector<double> E(nt * k);
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t l = 0; l < k; ++l) E[i * k + l] = eval_E(basis, l + 1, t_grid[i]);
  }

  // Per chunk: sums of Y^2 and Y^4 for every time.
  const std::size_t chunks = (n_paths + kPathChunk - 1) / kPathChunk;
  std::vector<std::vector<double>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    auto& acc = parts[c];
    acc.assign(2 * nt, 0.0);
    std::vector<double> xi(k);
    const std::size_t end = std::min(n_paths, (c + 1) * kPathChunk);
    for (std::size_t path = c * kPathChunk; path < end; ++path) {
      NormalStream normals(rng, static_cast<std::uint32_t>(path));
      for (auto& v : xi) v = normals.next();
      for (std::size_t i = 0; i < nt; ++i) {
        double y = 0.0;
        for (std::size_t l = 0; l < k; ++l) y += E[i * k + l] * xi[l];
        const double y2 = y * y;
        acc[2 * i] += y2;
        acc[2 * i + 1] += y2 * y2;
      }
    }
  });
  std::vector<double> total(2 * nt, 0.0);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  }

  KlPathCheck out;
  const double n = static_cast<double>(n_paths);
  for (std::size_t i = 0; i < nt; ++i) {
    const double m2 = total[2 * i] / n;
    const double m4 = total[2 * i + 1] / n;
    const double dev = std::abs(m2 - kl_partial(basis, k, t_grid[i]));
    const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
    if (se > 0.0) out.max_standardized = std::max(out.max_standardized, dev / se);
  }
  return out;
}

}  // namespace chaos
