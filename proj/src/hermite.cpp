#include "chaos/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "chaos/error.hpp"

namespace chaos {

namespace {

void check_order(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "Hermite order must be >= 0");
  if (n > kMaxHermiteOrder) {
    throw Error(ErrorCode::OrderTooLarge,
                "Hermite order " + std::to_string(n) + " exceeds " +
                    std::to_string(kMaxHermiteOrder));
  }
}

}  // namespace

void hermite_all(int n, double x, std::span<double> out) {
  check_order(n);
  if (out.size() < static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "output span too short");
  }
  out[0] = 1.0;
  if (n == 0) return;
  out[1] = x;
  // H_{m+1} = (x H_m - sqrt(m) H_{m-1}) / sqrt(m+1)
  for (int m = 1; m < n; ++m) {
    out[m + 1] = (x * out[m] - std::sqrt(static_cast<double>(m)) * out[m - 1]) /
                 std::sqrt(static_cast<double>(m + 1));
  }
}

double hermite_n(int n, double x) {
  check_order(n);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = x;
  for (int m = 1; m < n; ++m) {
    const double next =
        (x * cur - std::sqrt(static_cast<double>(m)) * prev) / std::sqrt(static_cast<double>(m + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double psi(const MultiIndex& alpha, std::span<const double> xi) {
  if (alpha.max_coordinate() > xi.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "alpha uses coordinate " + std::to_string(alpha.max_coordinate()) +
                    " but only " + std::to_string(xi.size()) + " Gaussians were given");
  }
  double value = 1.0;
  for (const auto& [coord, order] : alpha.entries()) {
    value *= hermite_n(static_cast<int>(order), xi[coord - 1]);
  }
  return value;
}

double triple_scalar(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) {
    throw Error(ErrorCode::InvalidArgument, "orders must be >= 0");
  }
  if (a > kMaxTripleOrder || b > kMaxTripleOrder || c > kMaxTripleOrder) {
    throw Error(ErrorCode::OrderTooLarge, "triple products are limited to order 20");
  }
  // Fixed argument order keeps the result bitwise symmetric.
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  const int total = a + b + c;
  if (total % 2 != 0) return 0.0;
  const int s = total / 2;
  if (s < a || s < b || s < c) return 0.0;
  const double log_value =
      0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) + std::lgamma(c + 1.0)) -
      std::lgamma(s - a + 1.0) - std::lgamma(s - b + 1.0) - std::lgamma(s - c + 1.0);
  return std::exp(log_value);
}

double triple_multi(const MultiIndex& alpha, const MultiIndex& beta,
                    const MultiIndex& gamma) {
  // Coordinates outside all three supports contribute E[H_0^3] = 1.
  std::vector<MultiIndex::Coordinate> coords;
  for (const auto* m : {&alpha, &beta, &gamma}) {
    for (const auto& e : m->entries()) coords.push_back(e.first);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  double value = 1.0;
  for (auto i : coords) {
    value *= triple_scalar(static_cast<int>(alpha[i]), static_cast<int>(beta[i]),
                           static_cast<int>(gamma[i]));
    if (value == 0.0) return 0.0;
  }
  return value;
}

std::vector<std::pair<MultiIndex, double>> product_expansion(const MultiIndex& beta,
                                                             const MultiIndex& gamma) {
  std::vector<MultiIndex::Coordinate> coords;
  for (const auto& e : beta.entries()) coords.push_back(e.first);
  for (const auto& e : gamma.entries()) coords.push_back(e.first);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  // Per coordinate, H_b H_c = sum_{a = |b-c|, |b-c|+2, ..., b+c} E[H_a H_b H_c] H_a.
  struct Choice {
    std::vector<std::pair<MultiIndex::Value, double>> options;
  };
  std::vector<Choice> choices;
  choices.reserve(coords.size());
  for (auto i : coords) {
    const int b = static_cast<int>(beta[i]);
    const int c = static_cast<int>(gamma[i]);
    Choice choice;
    for (int a = std::abs(b - c); a <= b + c; a += 2) {
      choice.options.emplace_back(static_cast<MultiIndex::Value>(a), triple_scalar(a, b, c));
    }
    choices.push_back(std::move(choice));
  }

  std::vector<std::pair<MultiIndex, double>> terms;
  std::vector<std::size_t> pick(coords.size(), 0);
  while (true) {
    std::vector<MultiIndex::Entry> entries;
    double weight = 1.0;
    for (std::size_t n = 0; n < coords.size(); ++n) {
      const auto& [value, w] = choices[n].options[pick[n]];
      weight *= w;
      if (value > 0) entries.emplace_back(coords[n], value);
    }
    if (weight != 0.0) terms.emplace_back(MultiIndex::from_entries(std::move(entries)), weight);

    std::size_t n = 0;
    while (n < coords.size() && ++pick[n] == choices[n].options.size()) {
      pick[n] = 0;
      ++n;
    }
    if (n == coords.size()) break;
  }
  return terms;
}

}  // namespace chaos
