#pragma once

// Bernoulli polynomials B_0 .. B_8 with exact rational coefficients.

#include <array>
#include <cmath>
#include <cstdint>

#include "latkc/error.hpp"

namespace latkc {

inline constexpr int kMaxBernoulliDegree = 8;

namespace detail {

struct Rational {
  std::int64_t num;
  std::int64_t den;
};

// Coefficients of B_tau in ascending powers of x.
inline constexpr std::array<std::array<Rational, kMaxBernoulliDegree + 1>,
                            kMaxBernoulliDegree + 1>
    kBernoulliCoefficients{{
        {{{1, 1}}},
        {{{-1, 2}, {1, 1}}},
        {{{1, 6}, {-1, 1}, {1, 1}}},
        {{{0, 1}, {1, 2}, {-3, 2}, {1, 1}}},
        {{{-1, 30}, {0, 1}, {1, 1}, {-2, 1}, {1, 1}}},
        {{{0, 1}, {-1, 6}, {0, 1}, {5, 3}, {-5, 2}, {1, 1}}},
        {{{1, 42}, {0, 1}, {-1, 2}, {0, 1}, {5, 2}, {-3, 1}, {1, 1}}},
        {{{0, 1}, {1, 6}, {0, 1}, {-7, 6}, {0, 1}, {7, 2}, {-7, 2}, {1, 1}}},
        {{{-1, 30}, {0, 1}, {2, 3}, {0, 1}, {-7, 3}, {0, 1}, {14, 3}, {-4, 1}, {1, 1}}},
    }};

template <typename Real>
struct BernoulliTable {
  std::array<std::array<Real, kMaxBernoulliDegree + 1>, kMaxBernoulliDegree + 1> c{};
  BernoulliTable() {
    for (int t = 0; t <= kMaxBernoulliDegree; ++t) {
      for (int i = 0; i <= t; ++i) {
        const auto& r = kBernoulliCoefficients[t][i];
        c[t][i] = static_cast<Real>(r.num) / static_cast<Real>(r.den);
      }
    }
  }
};

template <typename Real>
const BernoulliTable<Real>& bernoulli_table() {
  static const BernoulliTable<Real> table;
  return table;
}

template <typename Real>
inline Real factorial(int k) {
  Real f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<Real>(i);
  return f;
}

}  // namespace detail

/// B_tau(x) by Horner's rule, 0 <= tau <= 8.
template <typename Real = double>
Real bernoulli_poly(int tau, Real x) {
  if (tau < 0 || tau > kMaxBernoulliDegree) {
    throw InvalidArgument("bernoulli_poly: degree " + std::to_string(tau) + " outside 0..8");
  }
  const auto& c = detail::bernoulli_table<Real>().c[tau];
  Real acc = c[tau];
  for (int i = tau - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

/// 1-periodic extension B_order({t}), order in {2,4,6,8}; valid for negative t.
template <typename Real = double>
Real periodic_bernoulli(int order, Real t) {
  if (order < 2 || order > kMaxBernoulliDegree || order % 2 != 0) {
    throw InvalidArgument("periodic_bernoulli: order must be one of 2, 4, 6, 8");
  }
  using std::floor;
  return bernoulli_poly<Real>(order, t - floor(t));
}

}  // namespace latkc
