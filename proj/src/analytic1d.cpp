#include "latkc/analytic1d.hpp"

#include <cmath>
#include <string>

#include "latkc/bernoulli.hpp"
#include "latkc/error.hpp"

namespace latkc::analytic1d {

namespace {

void require_at_least(std::uint64_t n, std::uint64_t min, const char* who) {
  if (n < min) {
    throw InvalidArgument(std::string(who) + ": n must be at least " + std::to_string(min));
  }
}

// 12n^3 + n + 3, in long double to keep n up to ~1e5 exact.
long double denom(std::uint64_t n) {
  const long double m = static_cast<long double>(n);
  return 12.0L * m * m * m + m + 3.0L;
}

}  // namespace

double kernel_explicit(double x, double y) {
  return 1.0 + 0.5 * bernoulli_poly(2, std::abs(x - y)) + (x - 0.5) * (y - 0.5);
}

std::vector<double> closed_form_weights(std::uint64_t n) {
  require_at_least(n, 2, "closed_form_weights");
  const long double m = static_cast<long double>(n);
  const long double w0 = 6.0L * m * m / denom(n);
  std::vector<double> w(n, static_cast<double>(2.0L * w0));
  w.front() = static_cast<double>(w0);
  w.back() = static_cast<double>(3.0L * w0);
  return w;
}

double gram_double_sum(std::uint64_t n) {
  require_at_least(n, 1, "gram_double_sum");
  const long double m = static_cast<long double>(n);
  return static_cast<double>((3.0L * m * m + 1.0L) / 3.0L);
}

double optimal_wce_squared(std::uint64_t n) {
  require_at_least(n, 2, "optimal_wce_squared");
  return static_cast<double>((static_cast<long double>(n) + 3.0L) / denom(n));
}

double equal_wce_squared(std::uint64_t n) {
  require_at_least(n, 1, "equal_wce_squared");
  const long double m = static_cast<long double>(n);
  return static_cast<double>(1.0L / (3.0L * m * m));
}

double embedding_gap_l2_sq(std::uint64_t n) {
  require_at_least(n, 2, "embedding_gap_l2_sq");
  const long double m = static_cast<long double>(n);
  const long double d = denom(n);
  return static_cast<double>(6.0L * m * (m + 15.0L) / (5.0L * d * d));
}

double boundary_gap(std::uint64_t n) {
  require_at_least(n, 2, "boundary_gap");
  return static_cast<double>(6.0L * static_cast<long double>(n) / denom(n));
}

}  // namespace latkc::analytic1d
