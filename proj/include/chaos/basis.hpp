#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chaos {

/// Orthonormal bases of L^2([0, T]).
///
/// Trigonometric: e_1 = 1, e_{2j} = sqrt(2) sin(2 pi j t), e_{2j+1} = sqrt(2) cos(2 pi j t).
/// Cosine:        e_l = sqrt(2) cos((l - 1/2) pi t), the eigenbasis of the
///                Brownian covariance (its KL partial sums are optimal in L^2).
/// Haar:          flat index 1 is e_0 = 1, then levels n = 1, 2, ... with
///                shifts j = 1..2^{n-1}, so the first 2^n flat indices span level n.
///
/// All three are defined on [0, 1] and mapped to [0, T] by t -> t / T with
/// values scaled by 1 / sqrt(T).
enum class BasisKind { Trigonometric, Cosine, Haar };

struct BasisSpec {
  BasisKind kind = BasisKind::Trigonometric;
  double horizon = 1.0;
};

/// "trig" | "cos" | "haar".
BasisKind parse_basis_kind(std::string_view token);
std::string_view basis_token(BasisKind kind) noexcept;

/// e_l(t). Haar is right-continuous at interior breakpoints and closed at T.
double eval_e(const BasisSpec& basis, std::size_t l, double t);
/// E_l(t) = int_0^t e_l(s) ds, closed form.
double eval_E(const BasisSpec& basis, std::size_t l, double t);

/// sum_{l<=k} E_l(t)^2. Tends to t as k grows.
double kl_partial(const BasisSpec& basis, std::size_t k, double t);

/// sum_{l>k} (E_l(t)^2 + int_0^t E_l(tau)^2 dtau).
///
/// Evaluated through the completeness identities sum_l E_l(t)^2 = t and
/// sum_l int_0^t E_l^2 = t^2 / 2, so only the first k terms are needed; the
/// time integral of the partial sum uses composite Simpson on `panels`
/// (even) equal panels of [0, t].
double tail_sum(const BasisSpec& basis, std::size_t k, double t,
                std::size_t panels = 1u << 14);

/// Interior points of (0, T) where one of e_1..e_k jumps. Sorted, unique.
std::vector<double> breakpoints(const BasisSpec& basis, std::size_t k);

/// Haar flat index <-> (level n, shift j); level 0 is e_0 with shift 1.
struct HaarLevel {
  int n = 0;
  long j = 1;
  friend bool operator==(const HaarLevel&, const HaarLevel&) = default;
};
HaarLevel haar_level(std::size_t l);
std::size_t haar_flat_index(HaarLevel level);

}  // namespace chaos
