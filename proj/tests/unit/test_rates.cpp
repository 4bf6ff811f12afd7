#include <doctest.h>

#include <cmath>
#include <vector>

#include "latkc/error.hpp"
#include "latkc/rates.hpp"

using namespace latkc;

TEST_CASE("exact power laws") {
  std::vector<double> ns;
  std::vector<double> errs;
  for (int m = 1; m <= 8; ++m) {
    ns.push_back(std::ldexp(1.0, m));
    errs.push_back(3.0 * std::pow(ns.back(), -2.0));
  }
  const auto fit = fit_rate(ns, errs);
  CHECK(std::abs(fit.slope + 2.0) < 1e-12);
  CHECK(std::abs(fit.intercept - std::log2(3.0)) < 1e-12);
  CHECK(fit.used == 8);

  const std::vector<double> flat(8, 0.7);
  CHECK(std::abs(fit_rate(ns, flat).slope) < 1e-12);

  const std::vector<double> n3{4, 8, 16};
  const std::vector<double> e3{0.25, 0.125, 0.0625};
  CHECK(std::abs(fit_rate(n3, e3).slope + 1.0) < 1e-12);
}

TEST_CASE("non-positive errors are skipped") {
  const std::vector<double> ns{2, 4, 8, 16};
  const std::vector<double> errs{0.5, 0.0, 0.125, 0.0625};
  const auto fit = fit_rate(ns, errs);
  CHECK(fit.used == 3);
  CHECK(fit.skipped == 1);
  CHECK(std::abs(fit.slope + 1.0) < 1e-12);
}

TEST_CASE("fit errors") {
  const std::vector<double> ns{2, 4, 8};
  CHECK_THROWS_AS(fit_rate(ns, std::vector<double>{1.0, 0.0, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(fit_rate(ns, std::vector<double>{1.0, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(fit_rate(std::vector<double>{2, 2, 2}, std::vector<double>{1.0, 0.5, 0.2}), InvalidArgument);
}
