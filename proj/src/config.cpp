#include "latkc/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latkc/error.hpp"

namespace latkc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

template <typename T>
T parse_number(const std::string& word, const std::string& context) {
  T value{};
  const char* first = word.data();
  const char* last = word.data() + word.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidArgument(context + ": cannot parse '" + word + "' as a number");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string source) {
  KeyValueConfig cfg;
  cfg.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    const std::string where = cfg.source_ + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value'");
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw InvalidArgument(where + ": empty key");
    if (!cfg.values_.emplace(key, value).second) {
      throw InvalidArgument(where + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::string& KeyValueConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument(source_ + ": missing key '" + key + "'");
  return it->second;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  return parse_number<std::int64_t>(raw(key), source_ + ": " + key);
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_number<double>(raw(key), source_ + ": " + key);
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& w : split_words(raw(key))) {
    out.push_back(parse_number<std::int64_t>(w, source_ + ": " + key));
  }
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split_words(raw(key))) out.push_back(parse_number<double>(w, source_ + ": " + key));
  return out;
}

std::vector<std::string> KeyValueConfig::get_word_list(const std::string& key) const {
  return split_words(raw(key));
}

void KeyValueConfig::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw InvalidArgument(source_ + ": unknown key '" + key + "'");
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace latkc
