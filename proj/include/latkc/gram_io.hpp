#pragma once

// Offline dumps of Gram matrices and weight arrays.
//
// Binary layout (all integers and reals little-endian):
//   offset 0   8 bytes   magic "LATKCBIN"
//   offset 8   u32       format version (1)
//   offset 12  u32       payload kind (1 = Gram matrix, 2 = weight vector)
//   offset 16  u64       rows
//   offset 24  u64       cols (1 for weight vectors)
//   offset 32  f64[rows * cols], row-major (IEEE-754 binary64)
//
// Text export: one real per line, printed with 17 significant digits.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "latkc/cubature.hpp"

namespace latkc {

inline constexpr char kBinaryMagic[8] = {'L', 'A', 'T', 'K', 'C', 'B', 'I', 'N'};
inline constexpr std::uint32_t kBinaryVersion = 1;

enum class PayloadKind : std::uint32_t { Gram = 1, Weights = 2 };

struct BinaryArray {
  PayloadKind kind;
  std::uint64_t rows;
  std::uint64_t cols;
  std::vector<double> values;  // row-major
};

void write_binary(const std::filesystem::path& path, const BinaryArray& array);
BinaryArray read_binary(const std::filesystem::path& path);

template <typename Real>
BinaryArray to_binary(const GramMatrix<Real>& gram) {
  const auto n = gram.n();
  BinaryArray out{PayloadKind::Gram, n, n, std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) out.values[k * n + l] = static_cast<double>(gram(k, l));
  }
  return out;
}

template <typename Real>
BinaryArray to_binary(std::span<const Real> weights) {
  BinaryArray out{PayloadKind::Weights, weights.size(), 1, std::vector<double>(weights.size())};
  for (std::size_t k = 0; k < weights.size(); ++k) out.values[k] = static_cast<double>(weights[k]);
  return out;
}

/// "%.17g"; round-trips every double. Used by all text outputs.
std::string format_real(double value);

void write_weights_text(const std::filesystem::path& path, std::span<const double> weights);
std::vector<double> read_weights_text(const std::filesystem::path& path);

}  // namespace latkc
