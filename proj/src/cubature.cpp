#include "latkc/cubature.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <thread>

#include "latkc/error.hpp"

namespace latkc {

const char* to_string(WeightMode mode) noexcept {
  return mode == WeightMode::Equal ? "equal" : "optimal";
}

template <typename Real>
Real GramMatrix<Real>::entry_sum() const {
  CompensatedSum<Real> acc;
  for (Eigen::Index l = 0; l < values_.cols(); ++l) {
    for (Eigen::Index k = 0; k < values_.rows(); ++k) acc.add(values_(k, l));
  }
  return acc.value();
}

template <typename Real>
CubatureRule<Real> CubatureRule<Real>::equal(PointSet points) {
  const std::size_t n = points.n();
  if (n == 0) throw InvalidArgument("cubature rule: empty point set");
  std::vector<Real> w(n, Real(1) / static_cast<Real>(n));
  return CubatureRule(std::move(points), std::move(w), WeightMode::Equal, std::nullopt, Real(0));
}

template <typename Real>
CubatureRule<Real> CubatureRule<Real>::optimal(PointSet points, std::vector<Real> weights,
                                               KernelSpec spec, Real residual) {
  if (weights.size() != points.n()) throw InvalidArgument("cubature rule: weight count != n");
  return CubatureRule(std::move(points), std::move(weights), WeightMode::Optimal, std::move(spec),
                      residual);
}

template <typename Real>
Real CubatureRule<Real>::weight_sum() const {
  CompensatedSum<Real> acc;
  for (Real w : weights_) acc.add(w);
  return acc.value();
}

namespace {

/// Evaluates kernel rows [row_begin, row_end) of the upper triangle.
template <typename Real, typename Sink>
void for_upper_triangle(const KernelSpec& spec, const PointSet& ps, std::size_t row_begin,
                        std::size_t row_end, Sink&& sink) {
  const std::size_t s = ps.s();
  const std::size_t n = ps.n();
  const Eta<Real> eta(spec.alpha());
  const KernelCombiner<Real> combine(spec.weights());
  std::vector<Real> etas(s);
  std::vector<Real> scratch(s + 1);
  for (std::size_t k = row_begin; k < row_end; ++k) {
    const auto x = ps.row(k);
    for (std::size_t l = k; l < n; ++l) {
      const auto y = ps.row(l);
      for (std::size_t j = 0; j < s; ++j) etas[j] = eta(Real(x[j]), Real(y[j]));
      sink(k, l, combine(etas, scratch));
    }
  }
}

void check_dims(const KernelSpec& spec, const PointSet& ps, const char* who) {
  if (spec.s() != ps.s()) {
    throw InvalidArgument(std::string(who) + ": kernel dimension " + std::to_string(spec.s()) +
                          " != point dimension " + std::to_string(ps.s()));
  }
}

void check_distinct(const PointSet& ps) {
  if (auto dup = find_duplicate_rows(ps)) throw DuplicatePointsError(dup->first, dup->second);
}

}  // namespace

template <typename Real>
GramMatrix<Real> assemble_gram(const KernelSpec& spec, const PointSet& ps, AssemblyOptions options) {
  check_dims(spec, ps, "assemble_gram");
  check_distinct(ps);
  const std::size_t n = ps.n();
  DenseMatrix<Real> g(n, n);
  auto store = [&g](std::size_t k, std::size_t l, Real v) {
    g(k, l) = v;
    g(l, k) = v;
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    for_upper_triangle<Real>(spec, ps, 0, n, store);
  } else {
    // Row k costs n - k entries; interleave rows so workers get equal shares.
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t k = t; k < n; k += jobs) for_upper_triangle<Real>(spec, ps, k, k + 1, store);
      });
    }
    for (auto& w : workers) w.join();
  }
  return GramMatrix<Real>(spec, ps, std::move(g));
}

template <typename Real>
CubatureRule<Real> solve_optimal_weights(const GramMatrix<Real>& gram, SolveOptions options) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const auto& k = gram.values();
  const Eigen::Index n = k.rows();
  Eigen::LLT<DenseMatrix<Real>> llt(k);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_optimal_weights: Cholesky factorisation failed for n = " +
                         std::to_string(n) + " (Gram matrix not positive definite)");
  }
  const Vec ones = Vec::Ones(n);
  Vec w = llt.solve(ones);
  Vec r = ones - k * w;
  w += llt.solve(r);
  r = ones - k * w;
  const Real residual = r.cwiseAbs().maxCoeff();
  using std::isfinite;
  if (!isfinite(static_cast<double>(residual)) ||
      static_cast<double>(residual) > options.residual_tolerance) {
    throw NumericalError("solve_optimal_weights: residual " +
                         std::to_string(static_cast<double>(residual)) + " exceeds tolerance");
  }
  std::vector<Real> weights(w.data(), w.data() + n);
  return CubatureRule<Real>::optimal(gram.points(), std::move(weights), gram.spec(), residual);
}

template <typename Real>
Real apply_rule(const CubatureRule<Real>& rule, std::span<const double> values) {
  const auto w = rule.weights();
  if (values.size() != w.size()) {
    throw InvalidArgument("apply_rule: " + std::to_string(values.size()) + " values for " +
                          std::to_string(w.size()) + " weights");
  }
  CompensatedSum<Real> acc;
  for (std::size_t k = 0; k < w.size(); ++k) acc.add(w[k] * Real(values[k]));
  return acc.value();
}

template <typename Real>
Real wce_from_square(Real squared) {
  using std::sqrt;
  if (squared >= 0) return sqrt(squared);
  if (squared >= Real(kWceRadicandFloor)) return Real(0);
  throw NumericalError("worst-case error: squared value " +
                       std::to_string(static_cast<double>(squared)) + " is negative");
}

template <typename Real>
Real wce_equal(const KernelSpec& spec, const PointSet& ps) {
  check_dims(spec, ps, "wce_equal");
  const std::size_t n = ps.n();
  CompensatedSum<Real> acc;
  for_upper_triangle<Real>(spec, ps, 0, n, [&acc](std::size_t k, std::size_t l, Real v) {
    acc.add(k == l ? v : Real(2) * v);
  });
  const Real nn = static_cast<Real>(n) * static_cast<Real>(n);
  acc.add(-nn);
  return wce_from_square(acc.value() / nn);
}

template <typename Real>
Real wce_equal(const GramMatrix<Real>& gram) {
  CompensatedSum<Real> acc;
  const auto& k = gram.values();
  for (Eigen::Index l = 0; l < k.cols(); ++l) {
    for (Eigen::Index i = 0; i < k.rows(); ++i) acc.add(k(i, l));
  }
  const Real nn = static_cast<Real>(gram.n()) * static_cast<Real>(gram.n());
  acc.add(-nn);
  return wce_from_square(acc.value() / nn);
}

template <typename Real>
Real wce_optimal(const CubatureRule<Real>& rule) {
  if (rule.mode() != WeightMode::Optimal) {
    throw InvalidArgument("wce_optimal: rule does not carry optimal weights");
  }
  CompensatedSum<Real> acc;
  acc.add(Real(1));
  for (Real w : rule.weights()) acc.add(-w);
  return wce_from_square(acc.value());
}

template <typename Real>
Real wce_general_squared(const GramMatrix<Real>& gram_eval, std::span<const Real> weights) {
  const auto& k = gram_eval.values();
  const std::size_t n = gram_eval.n();
  if (weights.size() != n) throw InvalidArgument("wce_general: weight count != n");
  CompensatedSum<Real> acc;
  acc.add(Real(1));
  for (Real w : weights) acc.add(Real(-2) * w);
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(weights[i] * weights[i] * k(i, i));
    for (std::size_t l = i + 1; l < n; ++l) acc.add(Real(2) * weights[i] * weights[l] * k(i, l));
  }
  return acc.value();
}

template <typename Real>
Real wce_general(const GramMatrix<Real>& gram_eval, std::span<const Real> weights) {
  return wce_from_square(wce_general_squared(gram_eval, weights));
}

template <typename Real>
Real wce_general(const KernelSpec& spec_eval, const PointSet& ps, std::span<const Real> weights) {
  check_dims(spec_eval, ps, "wce_general");
  if (weights.size() != ps.n()) throw InvalidArgument("wce_general: weight count != n");
  CompensatedSum<Real> acc;
  acc.add(Real(1));
  for (Real w : weights) acc.add(Real(-2) * w);
  for_upper_triangle<Real>(spec_eval, ps, 0, ps.n(), [&](std::size_t i, std::size_t l, Real v) {
    acc.add((i == l ? Real(1) : Real(2)) * weights[i] * weights[l] * v);
  });
  return wce_from_square(acc.value());
}

#define LATKC_INSTANTIATE(Real)                                                                   \
  template class GramMatrix<Real>;                                                                \
  template class CubatureRule<Real>;                                                              \
  template GramMatrix<Real> assemble_gram<Real>(const KernelSpec&, const PointSet&,               \
                                                AssemblyOptions);                                 \
  template CubatureRule<Real> solve_optimal_weights<Real>(const GramMatrix<Real>&, SolveOptions); \
  template Real apply_rule<Real>(const CubatureRule<Real>&, std::span<const double>);             \
  template Real wce_from_square<Real>(Real);                                                      \
  template Real wce_equal<Real>(const KernelSpec&, const PointSet&);                              \
  template Real wce_equal<Real>(const GramMatrix<Real>&);                                         \
  template Real wce_optimal<Real>(const CubatureRule<Real>&);                                     \
  template Real wce_general_squared<Real>(const GramMatrix<Real>&, std::span<const Real>);        \
  template Real wce_general<Real>(const GramMatrix<Real>&, std::span<const Real>);                \
  template Real wce_general<Real>(const KernelSpec&, const PointSet&, std::span<const Real>);

LATKC_INSTANTIATE(double)
LATKC_INSTANTIATE(long double)

#undef LATKC_INSTANTIATE

}  // namespace latkc
