#include "latkc/gram_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "latkc/error.hpp"

namespace latkc {

namespace {

template <typename UInt>
void put_le(std::ofstream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::ifstream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IoError(path.string() + ": truncated binary file");
  }
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_binary(const std::filesystem::path& path, const BinaryArray& array) {
  if (array.values.size() != array.rows * array.cols) {
    throw InvalidArgument("write_binary: value count does not match shape");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kBinaryMagic, sizeof kBinaryMagic);
  put_le<std::uint32_t>(out, kBinaryVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(array.kind));
  put_le<std::uint64_t>(out, array.rows);
  put_le<std::uint64_t>(out, array.cols);
  for (double v : array.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("write failed for " + path.string());
}

BinaryArray read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[sizeof kBinaryMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0) {
    throw IoError(path.string() + ": bad magic header");
  }
  if (get_le<std::uint32_t>(in, path) != kBinaryVersion) {
    throw IoError(path.string() + ": unsupported format version");
  }
  const auto kind = get_le<std::uint32_t>(in, path);
  if (kind != 1 && kind != 2) throw IoError(path.string() + ": unknown payload kind");
  BinaryArray out{static_cast<PayloadKind>(kind), get_le<std::uint64_t>(in, path),
                  get_le<std::uint64_t>(in, path), {}};
  out.values.resize(out.rows * out.cols);
  for (auto& v : out.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in, path));
  return out;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_weights_text(const std::filesystem::path& path, std::span<const double> weights) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (double w : weights) out << format_real(w) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_weights_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> out;
  double v = 0;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw IoError(path.string() + ": malformed weight file");
  return out;
}

}  // namespace latkc
