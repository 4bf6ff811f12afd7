#pragma once

// Plain-text "key = value" files. '#' starts a comment; keys are unique.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace latkc {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string source = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  std::string get_string(const std::string& key) const { return raw(key); }
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_word_list(const std::string& key) const;

  /// Throws InvalidArgument naming the first key not in `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

/// 64-bit FNV-1a, printed as 16 hex digits; used to tag output rows.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace latkc
