#include "latkc/rates.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "latkc/error.hpp"

namespace latkc {

RateFit fit_rate(std::span<const double> ns, std::span<const double> errs) {
  if (ns.size() != errs.size()) throw InvalidArgument("fit_rate: ns and errs differ in length");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0)) throw InvalidArgument("fit_rate: n must be positive");
    if (errs[i] > 0.0 && std::isfinite(errs[i])) {
      xs.push_back(std::log2(ns[i]));
      ys.push_back(std::log2(errs[i]));
    }
  }
  if (xs.size() < 3) {
    throw InvalidArgument("fit_rate: need at least 3 positive errors, have " + std::to_string(xs.size()));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_rate: all n are equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, xs.size(), ns.size() - xs.size()};
}

}  // namespace latkc
