#pragma once

// Reproducing kernel of the weighted Sobolev space of dominating mixed
// smoothness alpha on [0,1]^s, for product and POD coordinate weights:
//
//   K(x, y) = sum_u gamma_u prod_{j in u} eta_alpha(x_j, y_j),
//   eta_alpha(x, y) = sum_{tau=1}^{alpha} B_tau(x) B_tau(y) / (tau!)^2
//                     + (-1)^{alpha+1} B_{2 alpha}({x - y}) / (2 alpha)!.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latkc/bernoulli.hpp"
#include "latkc/config.hpp"
#include "latkc/error.hpp"

namespace latkc {

enum class WeightScheme { Product, POD };

const char* to_string(WeightScheme scheme) noexcept;

/// Coordinate weights gamma_u. Product: gamma_u = prod_{j in u} gt_j.
/// POD: gamma_u = Gamma_{|u|} prod_{j in u} gt_j with Gamma_0 = 1.
class CoordinateWeights {
 public:
  static CoordinateWeights product(std::vector<double> gamma_tilde);
  static CoordinateWeights pod(std::vector<double> order_weights, std::vector<double> gamma_tilde);

  WeightScheme scheme() const noexcept { return scheme_; }
  std::size_t s() const noexcept { return gamma_tilde_.size(); }
  std::span<const double> gamma_tilde() const noexcept { return gamma_tilde_; }
  /// Gamma_0..Gamma_s; empty for product weights.
  std::span<const double> order_weights() const noexcept { return order_weights_; }

  /// gamma_u for a subset u of {0,...,s-1} (0-based coordinate indices).
  double subset_weight(std::span<const std::size_t> u) const;

  friend bool operator==(const CoordinateWeights&, const CoordinateWeights&) = default;

 private:
  CoordinateWeights(WeightScheme scheme, std::vector<double> order_weights,
                    std::vector<double> gamma_tilde);

  WeightScheme scheme_;
  std::vector<double> order_weights_;
  std::vector<double> gamma_tilde_;
};

class KernelSpec {
 public:
  /// alpha must be in 1..4.
  KernelSpec(int alpha, CoordinateWeights weights);

  /// Unweighted space: product weights with gamma_tilde = 1.
  static KernelSpec unweighted(int alpha, std::size_t s);

  int alpha() const noexcept { return alpha_; }
  std::size_t s() const noexcept { return weights_.s(); }
  const CoordinateWeights& weights() const noexcept { return weights_; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  int alpha_;
  CoordinateWeights weights_;
};

/// Reads a kernel description file (grammar in README).
KernelSpec load_kernel_spec(const std::filesystem::path& path);
KernelSpec parse_kernel_spec(std::string_view text);
/// Reads the kernel keys (scheme, alpha, s, gamma_tilde, Gamma) of a larger
/// config, ignoring any other keys.
KernelSpec kernel_spec_from(const KeyValueConfig& cfg);

/// Univariate kernel increment eta_alpha(x, y) = K^alpha_{1,1}(x, y) - 1 for
/// x, y in [0,1]. Uses B_{2 alpha}(|x - y|), which equals B_{2 alpha}({x - y})
/// there and is exactly symmetric in (x, y).
template <typename Real>
class Eta {
 public:
  explicit Eta(int alpha) : alpha_(alpha) {
    if (alpha < 1 || alpha > kMaxBernoulliDegree / 2) {
      throw InvalidArgument("eta_alpha: alpha must be in 1..4");
    }
    for (int tau = 1; tau <= alpha; ++tau) {
      const Real f = detail::factorial<Real>(tau);
      inv_fact_sq_[tau] = Real(1) / (f * f);
    }
    periodic_coeff_ = (alpha % 2 == 1 ? Real(1) : Real(-1)) / detail::factorial<Real>(2 * alpha);
  }

  int alpha() const noexcept { return alpha_; }

  Real operator()(Real x, Real y) const {
    if (!(x >= 0 && x <= 1 && y >= 0 && y <= 1)) {
      throw InvalidArgument("eta_alpha: arguments must lie in [0,1]");
    }
    Real acc = 0;
    for (int tau = 1; tau <= alpha_; ++tau) {
      acc += bernoulli_poly<Real>(tau, x) * bernoulli_poly<Real>(tau, y) * inv_fact_sq_[tau];
    }
    using std::abs;
    return acc + periodic_coeff_ * bernoulli_poly<Real>(2 * alpha_, abs(x - y));
  }

 private:
  int alpha_;
  Real inv_fact_sq_[kMaxBernoulliDegree / 2 + 1]{};
  Real periodic_coeff_{};
};

template <typename Real = double>
Real eta_alpha(int alpha, Real x, Real y) {
  return Eta<Real>(alpha)(x, y);
}

/// Combines per-coordinate eta values into a kernel value. Product weights
/// cost O(s); POD weights use the recursion
///   P_{k,0} = 1, P_{k,l} = P_{k-1,l} + gt_k eta_k P_{k-1,l-1},
///   K = sum_l Gamma_l P_{s,l}
/// at O(s^2). `scratch` must hold at least s + 1 entries.
template <typename Real>
class KernelCombiner {
 public:
  explicit KernelCombiner(const CoordinateWeights& w)
      : scheme_(w.scheme()),
        gamma_tilde_(w.gamma_tilde().begin(), w.gamma_tilde().end()),
        order_weights_(w.order_weights().begin(), w.order_weights().end()) {}

  std::size_t s() const noexcept { return gamma_tilde_.size(); }

  Real operator()(std::span<const Real> eta, std::span<Real> scratch) const {
    const std::size_t s = gamma_tilde_.size();
    if (scheme_ == WeightScheme::Product) {
      Real k = 1;
      for (std::size_t j = 0; j < s; ++j) k *= Real(1) + gamma_tilde_[j] * eta[j];
      return k;
    }
    Real* p = scratch.data();
    p[0] = 1;
    for (std::size_t l = 1; l <= s; ++l) p[l] = 0;
    for (std::size_t j = 0; j < s; ++j) {
      const Real g = gamma_tilde_[j] * eta[j];
      // After step j, p[l] holds P_{j+1,l}; update high orders first.
      for (std::size_t l = j + 1; l >= 1; --l) p[l] += g * p[l - 1];
    }
    Real k = 0;
    for (std::size_t l = 0; l <= s; ++l) k += order_weights_[l] * p[l];
    return k;
  }

 private:
  WeightScheme scheme_;
  std::vector<Real> gamma_tilde_;
  std::vector<Real> order_weights_;
};

/// K^alpha_{s,gamma}(x, y).
template <typename Real = double>
Real kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != spec.s() || y.size() != spec.s()) {
    throw InvalidArgument("kernel_eval: point dimension does not match kernel dimension " +
                          std::to_string(spec.s()));
  }
  const Eta<Real> eta(spec.alpha());
  std::vector<Real> etas(spec.s());
  for (std::size_t j = 0; j < spec.s(); ++j) etas[j] = eta(Real(x[j]), Real(y[j]));
  std::vector<Real> scratch(spec.s() + 1);
  return KernelCombiner<Real>(spec.weights())(etas, scratch);
}

}  // namespace latkc
