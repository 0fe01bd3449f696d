#pragma once

#include <span>
#include <utility>
#include <vector>

#include "chaos/multiindex.hpp"

namespace chaos {

inline constexpr int kMaxHermiteOrder = 64;
inline constexpr int kMaxTripleOrder = 20;

/// Normalised Hermite polynomial H_n(x), E[H_n(xi)^2] = 1 for xi ~ N(0, 1).
double hermite_n(int n, double x);

/// H_0(x) .. H_n(x) written to `out` (size n + 1).
void hermite_all(int n, double x, std::span<double> out);

/// Psi^alpha(xi) = prod_i H_{alpha_i}(xi_i); `xi` holds (W(e_1), ..., W(e_k)).
double psi(const MultiIndex& alpha, std::span<const double> xi);

/// E[H_a H_b H_c] for a single standard normal.
double triple_scalar(int a, int b, int c);

/// E[Psi^alpha Psi^beta Psi^gamma] = prod_i triple_scalar(alpha_i, beta_i, gamma_i).
double triple_multi(const MultiIndex& alpha, const MultiIndex& beta,
                    const MultiIndex& gamma);

/// Expansion of Psi^beta * Psi^gamma = sum_alpha c_alpha Psi^alpha, with
/// c_alpha = triple_multi(alpha, beta, gamma). Only nonzero terms are returned.
std::vector<std::pair<MultiIndex, double>> product_expansion(const MultiIndex& beta,
                                                             const MultiIndex& gamma);

}  // namespace chaos
