#pragma once

// Gram assembly, optimal (kernel cubature) weights and worst-case errors.
//
// Everything is templated on the working precision. `double` suffices for
// alpha = 1; the tent-transformed alpha = 2 / alpha = 4 study needs
// `long double`, because its squared worst-case errors drop to ~1e-16 where
// the O(1) terms of the WCE formulas cancel.

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "latkc/kernel.hpp"
#include "latkc/points.hpp"

namespace latkc {

template <typename Real>
using DenseMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Neumaier-compensated running sum.
template <typename Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    using std::abs;
    if (abs(sum_) >= abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + carry_; }

 private:
  Real sum_ = 0;
  Real carry_ = 0;
};

template <typename Real>
class GramMatrix {
 public:
  GramMatrix(KernelSpec spec, PointSet points, DenseMatrix<Real> values)
      : spec_(std::move(spec)), points_(std::move(points)), values_(std::move(values)) {}

  std::size_t n() const noexcept { return points_.n(); }
  const KernelSpec& spec() const noexcept { return spec_; }
  const PointSet& points() const noexcept { return points_; }
  const DenseMatrix<Real>& values() const noexcept { return values_; }
  Real operator()(std::size_t k, std::size_t l) const { return values_(k, l); }

  /// Sum of all entries, compensated.
  Real entry_sum() const;

 private:
  KernelSpec spec_;
  PointSet points_;
  DenseMatrix<Real> values_;
};

enum class WeightMode { Equal, Optimal };

const char* to_string(WeightMode mode) noexcept;

template <typename Real>
class CubatureRule {
 public:
  /// Equal weights 1/n.
  static CubatureRule equal(PointSet points);
  /// Weights from a Gram solve; `residual` is ||K w - 1||_inf.
  static CubatureRule optimal(PointSet points, std::vector<Real> weights, KernelSpec spec,
                              Real residual);

  const PointSet& points() const noexcept { return points_; }
  std::span<const Real> weights() const noexcept { return weights_; }
  WeightMode mode() const noexcept { return mode_; }
  /// Kernel the weights were derived from; empty for equal weights.
  const std::optional<KernelSpec>& spec() const noexcept { return spec_; }
  Real residual() const noexcept { return residual_; }
  Real weight_sum() const;

 private:
  CubatureRule(PointSet points, std::vector<Real> weights, WeightMode mode,
               std::optional<KernelSpec> spec, Real residual)
      : points_(std::move(points)),
        weights_(std::move(weights)),
        mode_(mode),
        spec_(std::move(spec)),
        residual_(residual) {}

  PointSet points_;
  std::vector<Real> weights_;
  WeightMode mode_;
  std::optional<KernelSpec> spec_;
  Real residual_;
};

struct AssemblyOptions {
  /// Worker threads for the upper triangle; the result does not depend on it.
  unsigned jobs = 1;
};

/// Entry (k, l) = K(t_k, t_l). Only the upper triangle is evaluated. Throws
/// DuplicatePointsError if two nodes coincide.
template <typename Real>
GramMatrix<Real> assemble_gram(const KernelSpec& spec, const PointSet& ps,
                               AssemblyOptions options = {});

struct SolveOptions {
  /// Upper bound on ||K w - 1||_inf after one refinement step.
  double residual_tolerance = 1e-8;
};

/// Solves K w = 1 by Cholesky (no regularisation). A failed factorisation or
/// a residual above tolerance raises NumericalError.
template <typename Real>
CubatureRule<Real> solve_optimal_weights(const GramMatrix<Real>& gram, SolveOptions options = {});

/// sum_k w_k values_k.
template <typename Real>
Real apply_rule(const CubatureRule<Real>& rule, std::span<const double> values);

/// Clamp policy for squared worst-case errors: radicands in [-1e-12, 0) map
/// to 0, anything more negative raises NumericalError.
template <typename Real>
Real wce_from_square(Real squared);

inline constexpr double kWceRadicandFloor = -1e-12;

/// sqrt(-1 + n^-2 sum_{k,k'} K(t_k, t_k')), evaluated without storing the Gram.
template <typename Real>
Real wce_equal(const KernelSpec& spec, const PointSet& ps);
template <typename Real>
Real wce_equal(const GramMatrix<Real>& gram);

/// sqrt(1 - sum_k w*_k).
template <typename Real>
Real wce_optimal(const CubatureRule<Real>& rule);

/// sqrt(1 - 2 sum_k w_k + sum_{k,k'} w_k w_k' K_eval(t_k, t_k')) for arbitrary
/// weights; `spec_eval` may differ from the kernel that produced them.
template <typename Real>
Real wce_general(const KernelSpec& spec_eval, const PointSet& ps, std::span<const Real> weights);
template <typename Real>
Real wce_general(const GramMatrix<Real>& gram_eval, std::span<const Real> weights);

/// Squared forms, without the clamp (for diagnostics and tests).
template <typename Real>
Real wce_general_squared(const GramMatrix<Real>& gram_eval, std::span<const Real> weights);

}  // namespace latkc
