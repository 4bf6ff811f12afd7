#pragma once

#include <cstddef>
#include <span>

namespace latkc {

struct RateFit {
  double slope;         // d log2(err) / d log2(n)
  double intercept;     // log2(err) at n = 1
  std::size_t used;     // pairs that entered the fit
  std::size_t skipped;  // pairs dropped because err <= 0
};

/// Ordinary least squares of log2(err) against log2(n). Non-positive errors
/// are dropped (reported in `skipped`); fewer than 3 usable pairs is an error.
RateFit fit_rate(std::span<const double> ns, std::span<const double> errs);

}  // namespace latkc
