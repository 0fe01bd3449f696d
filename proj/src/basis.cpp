#include "chaos/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "chaos/error.hpp"

namespace chaos {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

struct HaarSupport {
  double left, mid, right, height;
};

HaarSupport haar_support(HaarLevel level) {
  const double width = std::ldexp(1.0, -level.n + 1);
  const double left = static_cast<double>(level.j - 1) * width;
  return {left, left + 0.5 * width, left + width, std::pow(2.0, 0.5 * (level.n - 1))};
}

// Values on the reference interval [0, 1].
double unit_e(BasisKind kind, std::size_t l, double s) {
  switch (kind) {
    case BasisKind::Trigonometric: {
      if (l == 1) return 1.0;
      const double j = static_cast<double>(l / 2);
      return l % 2 == 0 ? sqrt2 * std::sin(2.0 * pi * j * s)
                        : sqrt2 * std::cos(2.0 * pi * j * s);
    }
    case BasisKind::Cosine: {
      const double w = (static_cast<double>(l) - 0.5) * pi;
      return sqrt2 * std::cos(w * s);
    }
    case BasisKind::Haar: {
      if (l == 1) return 1.0;
      const auto sup = haar_support(haar_level(l));
      if (s >= sup.left && s < sup.mid) return sup.height;
      if (s >= sup.mid && s < sup.right) return -sup.height;
      if (s == 1.0 && sup.right == 1.0) return -sup.height;
      return 0.0;
    }
  }
  return 0.0;
}

double unit_E(BasisKind kind, std::size_t l, double s) {
  switch (kind) {
    case BasisKind::Trigonometric: {
      if (l == 1) return s;
      const double j = static_cast<double>(l / 2);
      const double scale = sqrt2 * pi * j;
      return l % 2 == 0 ? (1.0 - std::cos(2.0 * pi * j * s)) / scale
                        : std::sin(2.0 * pi * j * s) / scale;
    }
    case BasisKind::Cosine: {
      const double w = (static_cast<double>(l) - 0.5) * pi;
      return sqrt2 * std::sin(w * s) / w;
    }
    case BasisKind::Haar: {
      if (l == 1) return s;
      const auto sup = haar_support(haar_level(l));
      if (s >= sup.left && s <= sup.mid) return sup.height * (s - sup.left);
      if (s > sup.mid && s <= sup.right) return sup.height * (sup.right - s);
      return 0.0;
    }
  }
  return 0.0;
}

void check_args(const BasisSpec& basis, std::size_t l, double t) {
  if (!(basis.horizon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "basis horizon must be positive");
  }
  if (l == 0) throw Error(ErrorCode::InvalidArgument, "basis indices are 1-based");
  if (!(t >= 0.0 && t <= basis.horizon)) {
    throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [0, " +
                                            std::to_string(basis.horizon) + "]");
  }
}

}  // namespace

BasisKind parse_basis_kind(std::string_view token) {
  if (token == "trig") return BasisKind::Trigonometric;
  if (token == "cos") return BasisKind::Cosine;
  if (token == "haar") return BasisKind::Haar;
  throw Error(ErrorCode::ParseError,
              "unknown basis '" + std::string(token) + "' (expected trig|cos|haar)");
}

std::string_view basis_token(BasisKind kind) noexcept {
  switch (kind) {
    case BasisKind::Trigonometric: return "trig";
    case BasisKind::Cosine: return "cos";
    case BasisKind::Haar: return "haar";
  }
  return "?";
}

double eval_e(const BasisSpec& basis, std::size_t l, double t) {
  check_args(basis, l, t);
  const double T = basis.horizon;
  return unit_e(basis.kind, l, t / T) / std::sqrt(T);
}

double eval_E(const BasisSpec& basis, std::size_t l, double t) {
  check_args(basis, l, t);
  const double T = basis.horizon;
  return unit_E(basis.kind, l, t / T) * std::sqrt(T);
}

double kl_partial(const BasisSpec& basis, std::size_t k, double t) {
  check_args(basis, 1, t);
  double sum = 0.0;
  for (std::size_t l = 1; l <= k; ++l) {
    const double E = eval_E(basis, l, t);
    sum += E * E;
  }
  return sum;
}

double tail_sum(const BasisSpec& basis, std::size_t k, double t, std::size_t panels) {
  check_args(basis, 1, t);
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (panels < 2 || panels % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "Simpson needs an even number of panels");
  }
  const double pointwise = t - kl_partial(basis, k, t);
  if (t == 0.0) return 0.0;

  const double h = t / static_cast<double>(panels);
  double integral = kl_partial(basis, k, 0.0) + kl_partial(basis, k, t);
  for (std::size_t i = 1; i < panels; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    integral += w * kl_partial(basis, k, std::min(t, static_cast<double>(i) * h));
  }
  integral *= h / 3.0;

  return std::max(0.0, pointwise) + std::max(0.0, 0.5 * t * t - integral);
}

std::vector<double> breakpoints(const BasisSpec& basis, std::size_t k) {
  std::vector<double> points;
  if (basis.kind != BasisKind::Haar) return points;
  for (std::size_t l = 2; l <= k; ++l) {
    const auto sup = haar_support(haar_level(l));
    for (double s : {sup.left, sup.mid, sup.right}) {
      if (s > 0.0 && s < 1.0) points.push_back(s * basis.horizon);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

HaarLevel haar_level(std::size_t l) {
  if (l == 0) throw Error(ErrorCode::InvalidArgument, "basis indices are 1-based");
  if (l == 1) return {0, 1};
  const int n = static_cast<int>(std::bit_width(l - 1));
  const long j = static_cast<long>(l - (std::size_t{1} << (n - 1)));
  return {n, j};
}

std::size_t haar_flat_index(HaarLevel level) {
  if (level.n == 0) {
    if (level.j != 1) throw Error(ErrorCode::InvalidArgument, "level 0 has a single shift");
    return 1;
  }
  const long shifts = 1L << (level.n - 1);
  if (level.n < 0 || level.j < 1 || level.j > shifts) {
    throw Error(ErrorCode::InvalidArgument, "Haar shift out of range for its level");
  }
  return static_cast<std::size_t>(shifts + level.j);
}

}  // namespace chaos
