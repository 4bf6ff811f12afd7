#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "latkc/error.hpp"
#include "latkc/gram_io.hpp"

using namespace latkc;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "latkc_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<unsigned char> bytes_of(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("binary Gram dump round-trips and has the documented header") {
  const auto ps = apply_shift(generate_lattice(GeneratingVector(8, {1, 3})), sample_shift(2, 2));
  const auto g = assemble_gram<double>(KernelSpec::unweighted(2, 2), ps);
  const auto path = temp_path("gram.bin");
  write_binary(path, to_binary(g));

  const auto raw = bytes_of(path);
  REQUIRE(raw.size() == 32 + 64 * 8);
  CHECK(std::memcmp(raw.data(), "LATKCBIN", 8) == 0);
  CHECK(raw[8] == 1);
  CHECK(raw[9] == 0);
  CHECK(raw[12] == 1);
  CHECK(raw[16] == 8);
  CHECK(raw[24] == 8);
  double first = 0.0;
  std::memcpy(&first, raw.data() + 32, 8);
  CHECK(first == g(0, 0));

  const auto back = read_binary(path);
  CHECK(back.kind == PayloadKind::Gram);
  CHECK(back.rows == 8);
  CHECK(back.cols == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t l = 0; l < 8; ++l) CHECK(back.values[k * 8 + l] == g(k, l));
  }
}

TEST_CASE("weight dumps round-trip") {
  const std::vector<double> w{0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23};
  const auto bin = temp_path("w.bin");
  write_binary(bin, to_binary(std::span<const double>(w)));
  const auto back = read_binary(bin);
  CHECK(back.kind == PayloadKind::Weights);
  CHECK(back.cols == 1);
  CHECK(back.values == w);

  const auto txt = temp_path("w.txt");
  write_weights_text(txt, w);
  CHECK(read_weights_text(txt) == w);
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("corrupt binary files are rejected") {
  const auto path = temp_path("bad.bin");
  std::ofstream(path, std::ios::binary) << "NOTLATKC0000000000000000000000000";
  CHECK_THROWS_AS(read_binary(path), IoError);

  const auto good = temp_path("short.bin");
  const std::vector<double> w{1.0, 2.0};
  write_binary(good, to_binary(std::span<const double>(w)));
  std::filesystem::resize_file(good, 40);
  CHECK_THROWS_AS(read_binary(good), IoError);

  CHECK_THROWS_AS(read_binary(temp_path("missing.bin")), IoError);
  CHECK_THROWS_AS(write_binary(path, BinaryArray{PayloadKind::Weights, 3, 1, {1.0}}), InvalidArgument);

  const auto junk = temp_path("junk.txt");
  std::ofstream(junk) << "1.0\nfoo\n";
  CHECK_THROWS_AS(read_weights_text(junk), IoError);
}
