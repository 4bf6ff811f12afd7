#pragma once

// Closed forms for the alpha = 1, gamma = 1 kernel on the one-dimensional
// left-Riemann lattice t_k = k / n. They serve as exact oracles for the
// generic Gram / weight / WCE pipeline.

#include <cstdint>
#include <vector>

namespace latkc::analytic1d {

/// K(x, y) = 1 + B_2(|x - y|) / 2 + (x - 1/2)(y - 1/2) on [0,1]^2.
double kernel_explicit(double x, double y);

/// w_0 = 6n^2 / (12n^3 + n + 3), w_k = 2 w_0 (0 < k < n-1), w_{n-1} = 3 w_0. Needs n >= 2.
std::vector<double> closed_form_weights(std::uint64_t n);

/// sum_{k,k'} K(k/n, k'/n) = (3n^2 + 1) / 3, n >= 1.
double gram_double_sum(std::uint64_t n);

/// Squared optimal WCE, 1 - sum_k w_k = (n + 3) / (12n^3 + n + 3), n >= 2.
double optimal_wce_squared(std::uint64_t n);

/// Squared equal-weight WCE, 1 / (3 n^2), n >= 1.
double equal_wce_squared(std::uint64_t n);

/// ||1 - h_T||^2_{L^2(0,1)} for the kernel interpolant h_T of the constant 1:
/// 6n(n + 15) / (5 (12n^3 + n + 3)^2), n >= 2.
double embedding_gap_l2_sq(std::uint64_t n);

/// 1 - h_T(1) = 6n / (12n^3 + n + 3), n >= 2.
double boundary_gap(std::uint64_t n);

}  // namespace latkc::analytic1d
