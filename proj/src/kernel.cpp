#include "latkc/kernel.hpp"

#include <cmath>

#include "latkc/config.hpp"

namespace latkc {

const char* to_string(WeightScheme scheme) noexcept {
  return scheme == WeightScheme::Product ? "product" : "pod";
}

CoordinateWeights::CoordinateWeights(WeightScheme scheme, std::vector<double> order_weights,
                                     std::vector<double> gamma_tilde)
    : scheme_(scheme), order_weights_(std::move(order_weights)), gamma_tilde_(std::move(gamma_tilde)) {
  if (gamma_tilde_.empty()) throw InvalidArgument("coordinate weights: dimension must be positive");
  for (std::size_t j = 0; j < gamma_tilde_.size(); ++j) {
    if (!(gamma_tilde_[j] > 0.0) || !std::isfinite(gamma_tilde_[j])) {
      throw InvalidArgument("coordinate weights: gamma_tilde[" + std::to_string(j) +
                            "] must be positive and finite");
    }
  }
  if (scheme_ == WeightScheme::POD) {
    if (order_weights_.size() != gamma_tilde_.size() + 1) {
      throw InvalidArgument("coordinate weights: POD needs s + 1 = " +
                            std::to_string(gamma_tilde_.size() + 1) + " order weights, got " +
                            std::to_string(order_weights_.size()));
    }
    if (order_weights_[0] != 1.0) {
      throw InvalidArgument("coordinate weights: POD order weight Gamma_0 must equal 1");
    }
    for (double g : order_weights_) {
      if (!(g >= 0.0) || !std::isfinite(g)) {
        throw InvalidArgument("coordinate weights: order weights must be nonnegative and finite");
      }
    }
  }
}

CoordinateWeights CoordinateWeights::product(std::vector<double> gamma_tilde) {
  return CoordinateWeights(WeightScheme::Product, {}, std::move(gamma_tilde));
}

CoordinateWeights CoordinateWeights::pod(std::vector<double> order_weights,
                                         std::vector<double> gamma_tilde) {
  return CoordinateWeights(WeightScheme::POD, std::move(order_weights), std::move(gamma_tilde));
}

double CoordinateWeights::subset_weight(std::span<const std::size_t> u) const {
  double w = scheme_ == WeightScheme::POD ? order_weights_.at(u.size()) : 1.0;
  for (std::size_t j : u) w *= gamma_tilde_.at(j);
  return w;
}

KernelSpec::KernelSpec(int alpha, CoordinateWeights weights)
    : alpha_(alpha), weights_(std::move(weights)) {
  if (alpha_ < 1 || alpha_ > kMaxBernoulliDegree / 2) {
    throw InvalidArgument("kernel: smoothness alpha must be in 1..4, got " + std::to_string(alpha_));
  }
}

KernelSpec KernelSpec::unweighted(int alpha, std::size_t s) {
  return KernelSpec(alpha, CoordinateWeights::product(std::vector<double>(s, 1.0)));
}

KernelSpec kernel_spec_from(const KeyValueConfig& cfg) {
  const std::string scheme = cfg.get_string("scheme");
  const auto alpha = cfg.get_int("alpha");
  const auto s = cfg.get_int("s");
  if (s < 1) throw InvalidArgument(cfg.source() + ": s must be positive");
  auto gamma_tilde = cfg.get_double_list("gamma_tilde");
  if (gamma_tilde.size() == 1) gamma_tilde.assign(static_cast<std::size_t>(s), gamma_tilde[0]);
  if (gamma_tilde.size() != static_cast<std::size_t>(s)) {
    throw InvalidArgument(cfg.source() + ": gamma_tilde needs 1 or s values");
  }
  if (scheme == "product") {
    if (cfg.has("Gamma")) throw InvalidArgument(cfg.source() + ": Gamma is only valid for pod");
    return KernelSpec(static_cast<int>(alpha), CoordinateWeights::product(std::move(gamma_tilde)));
  }
  if (scheme == "pod") {
    return KernelSpec(static_cast<int>(alpha),
                      CoordinateWeights::pod(cfg.get_double_list("Gamma"), std::move(gamma_tilde)));
  }
  throw InvalidArgument(cfg.source() + ": scheme must be 'product' or 'pod'");
}

namespace {

KernelSpec strict_kernel_spec(const KeyValueConfig& cfg) {
  cfg.require_known({"scheme", "alpha", "s", "gamma_tilde", "Gamma"});
  return kernel_spec_from(cfg);
}

}  // namespace

KernelSpec parse_kernel_spec(std::string_view text) {
  return strict_kernel_spec(KeyValueConfig::parse(text));
}

KernelSpec load_kernel_spec(const std::filesystem::path& path) {
  return strict_kernel_spec(KeyValueConfig::load(path));
}

}  // namespace latkc
