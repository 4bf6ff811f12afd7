#pragma once

// Rank-1 lattice point sets, random shifts and the tent transform.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace latkc {

/// Fractional part x - floor(x); always in [0,1) for finite x.
double frac(double x);

/// Integer generating vector z of a rank-1 lattice with n points in s dimensions.
class GeneratingVector {
 public:
  /// Throws InvalidArgument unless n >= 1 and every component lies in {1,...,n-1}.
  /// For n = 1 the only lattice point is the origin and z is not checked.
  GeneratingVector(std::uint64_t n, std::vector<std::uint64_t> z);

  std::uint64_t n() const noexcept { return n_; }
  std::size_t s() const noexcept { return z_.size(); }
  std::span<const std::uint64_t> z() const noexcept { return z_; }

  /// The same vector re-targeted to m points, reducing every component mod m.
  /// Used for extensible sequences; a component that vanishes mod m is an error.
  GeneratingVector reduced(std::uint64_t m) const;

  /// Leading `dim` components.
  GeneratingVector truncated(std::size_t dim) const;

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> z_;
};

/// Random shift in [0,1)^s.
class Shift {
 public:
  explicit Shift(std::vector<double> delta);
  static Shift zero(std::size_t s) { return Shift(std::vector<double>(s, 0.0)); }

  std::size_t s() const noexcept { return delta_.size(); }
  std::span<const double> delta() const noexcept { return delta_; }

 private:
  std::vector<double> delta_;
};

enum class Provenance { PlainLattice, Shifted, ShiftedTent, External };

const char* to_string(Provenance p) noexcept;

/// Immutable n x s array of cubature nodes, stored row-major.
class PointSet {
 public:
  PointSet(std::size_t n, std::size_t s, std::vector<double> nodes, Provenance provenance);

  std::size_t n() const noexcept { return n_; }
  std::size_t s() const noexcept { return s_; }
  Provenance provenance() const noexcept { return provenance_; }

  std::span<const double> row(std::size_t k) const noexcept { return {nodes_.data() + k * s_, s_}; }
  double operator()(std::size_t k, std::size_t j) const noexcept { return nodes_[k * s_ + j]; }
  std::span<const double> data() const noexcept { return nodes_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t n_;
  std::size_t s_;
  std::vector<double> nodes_;
  Provenance provenance_;
};

/// Nodes {k z / n}, k = 0..n-1, computed in exact integer arithmetic.
PointSet generate_lattice(const GeneratingVector& gv);

/// Shift drawn from std::mt19937_64 seeded with `seed`; each component is
/// (draw >> 11) * 2^-53, so the result is bit-identical on every platform.
Shift sample_shift(std::uint64_t seed, std::size_t s);

/// frac(node + delta), componentwise.
PointSet apply_shift(const PointSet& ps, const Shift& shift);

/// Baker's transform phi(t) = 1 - |2t - 1|.
double tent(double t);
PointSet tent_transform(const PointSet& ps);

/// First pair of rows (i < j) that are bitwise identical, if any. O(n log n).
std::optional<std::pair<std::size_t, std::size_t>> find_duplicate_rows(const PointSet& ps);

/// Reads a generating-vector file: one integer per line, or "index value"
/// pairs; blank lines and lines starting with '#' are skipped. The first s
/// entries are reduced mod n.
GeneratingVector load_generating_vector(const std::filesystem::path& path, std::size_t s,
                                        std::uint64_t n);

}  // namespace latkc
