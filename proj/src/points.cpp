#include "latkc/points.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "latkc/error.hpp"

namespace latkc {

double frac(double x) { return x - std::floor(x); }

GeneratingVector::GeneratingVector(std::uint64_t n, std::vector<std::uint64_t> z)
    : n_(n), z_(std::move(z)) {
  if (n_ == 0) throw InvalidArgument("generating vector: n must be positive");
  if (z_.empty()) throw InvalidArgument("generating vector: dimension must be positive");
  if (n_ > (std::uint64_t{1} << 32)) throw InvalidArgument("generating vector: n exceeds 2^32");
  if (n_ == 1) return;
  for (std::size_t j = 0; j < z_.size(); ++j) {
    if (z_[j] < 1 || z_[j] >= n_) {
      throw InvalidArgument("generating vector: component " + std::to_string(j) + " = " +
                            std::to_string(z_[j]) + " outside {1,...," + std::to_string(n_ - 1) +
                            "}");
    }
  }
}

GeneratingVector GeneratingVector::reduced(std::uint64_t m) const {
  if (m == 0) throw InvalidArgument("generating vector: n must be positive");
  std::vector<std::uint64_t> z(z_.size());
  for (std::size_t j = 0; j < z_.size(); ++j) {
    z[j] = z_[j] % m;
    if (z[j] == 0 && m > 1) {
      throw InvalidArgument("generating vector: component " + std::to_string(j) + " = " +
                            std::to_string(z_[j]) + " vanishes mod " + std::to_string(m));
    }
    if (m == 1) z[j] = 1;
  }
  return GeneratingVector(m, std::move(z));
}

GeneratingVector GeneratingVector::truncated(std::size_t dim) const {
  if (dim == 0 || dim > z_.size()) {
    throw InvalidArgument("generating vector: cannot truncate to dimension " + std::to_string(dim));
  }
  return GeneratingVector(n_, std::vector<std::uint64_t>(z_.begin(), z_.begin() + dim));
}

Shift::Shift(std::vector<double> delta) : delta_(std::move(delta)) {
  for (double d : delta_) {
    if (!(d >= 0.0 && d < 1.0)) throw InvalidArgument("shift component outside [0,1)");
  }
}

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::PlainLattice: return "plain-lattice";
    case Provenance::Shifted: return "shifted";
    case Provenance::ShiftedTent: return "shifted-tent";
    case Provenance::External: return "external";
  }
  return "unknown";
}

PointSet::PointSet(std::size_t n, std::size_t s, std::vector<double> nodes, Provenance provenance)
    : n_(n), s_(s), nodes_(std::move(nodes)), provenance_(provenance) {
  if (s_ == 0) throw InvalidArgument("point set: dimension must be positive");
  if (nodes_.size() != n_ * s_) throw InvalidArgument("point set: node array has wrong size");
}

PointSet generate_lattice(const GeneratingVector& gv) {
  const std::uint64_t n = gv.n();
  const std::size_t s = gv.s();
  std::vector<double> nodes(n * s);
  const double dn = static_cast<double>(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < s; ++j) {
      // k < n <= 2^32 and z_j < n, so the product fits in 64 bits.
      nodes[k * s + j] = static_cast<double>((k * gv.z()[j]) % n) / dn;
    }
  }
  return PointSet(n, s, std::move(nodes), Provenance::PlainLattice);
}

Shift sample_shift(std::uint64_t seed, std::size_t s) {
  if (s == 0) throw InvalidArgument("sample_shift: dimension must be positive");
  std::mt19937_64 gen(seed);
  std::vector<double> delta(s);
  for (auto& d : delta) d = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return Shift(std::move(delta));
}

PointSet apply_shift(const PointSet& ps, const Shift& shift) {
  if (ps.s() != shift.s()) {
    throw InvalidArgument("apply_shift: point set has dimension " + std::to_string(ps.s()) +
                          " but shift has " + std::to_string(shift.s()));
  }
  std::vector<double> nodes(ps.data().begin(), ps.data().end());
  const std::size_t s = ps.s();
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = frac(nodes[i] + shift.delta()[i % s]);
  return PointSet(ps.n(), s, std::move(nodes), Provenance::Shifted);
}

double tent(double t) { return 1.0 - std::abs(2.0 * t - 1.0); }

PointSet tent_transform(const PointSet& ps) {
  std::vector<double> nodes(ps.data().begin(), ps.data().end());
  for (auto& x : nodes) x = tent(x);
  return PointSet(ps.n(), ps.s(), std::move(nodes), Provenance::ShiftedTent);
}

std::optional<std::pair<std::size_t, std::size_t>> find_duplicate_rows(const PointSet& ps) {
  const std::size_t n = ps.n();
  const std::size_t s = ps.s();
  auto bits = [&](std::size_t k, std::size_t j) { return std::bit_cast<std::uint64_t>(ps(k, j)); };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < s; ++j) {
      if (bits(a, j) != bits(b, j)) return bits(a, j) < bits(b, j);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t a = order[i - 1];
    const std::size_t b = order[i];
    bool same = true;
    for (std::size_t j = 0; j < s && same; ++j) same = bits(a, j) == bits(b, j);
    if (same) return std::pair{std::min(a, b), std::max(a, b)};
  }
  return std::nullopt;
}

GeneratingVector load_generating_vector(const std::filesystem::path& path, std::size_t s,
                                        std::uint64_t n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open generating vector file " + path.string());
  if (s == 0) throw InvalidArgument("load_generating_vector: dimension must be positive");

  std::vector<std::uint64_t> z;
  std::string line;
  std::size_t lineno = 0;
  while (z.size() < s && std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<long long> values;
    long long v = 0;
    while (fields >> v) values.push_back(v);
    if (values.empty() || values.size() > 2 || !fields.eof()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 1 or 2 integers");
    }
    const long long value = values.back();
    if (value <= 0) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": non-positive component");
    }
    z.push_back(static_cast<std::uint64_t>(value));
  }
  if (z.size() < s) {
    throw IoError(path.string() + ": found " + std::to_string(z.size()) + " entries, need " +
                  std::to_string(s));
  }
  // The stored vector may target a larger n (extensible sequences).
  std::uint64_t stored_n = n;
  for (auto v : z) stored_n = std::max(stored_n, v + 1);
  return GeneratingVector(stored_n, std::move(z)).reduced(n);
}

}  // namespace latkc
