#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace slidewin {

/// Flat "section.key" -> string settings read from an INI file (or from the
/// "config" object embedded in a JSON report). Typed getters record their
/// default when a key is absent, so after a run the object holds the fully
/// resolved configuration.
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& path);
  static Config parse_ini(std::string_view text);

  bool has(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  /// Applies a "section.key=value" override; throws Error(Config) if malformed.
  void apply_override(std::string_view assignment);

  std::string text(const std::string& key, const std::string& fallback);
  double number(const std::string& key, double fallback);
  std::size_t count(const std::string& key, std::size_t fallback);
  std::uint64_t seed(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::vector<std::size_t> counts(const std::string& key, const std::vector<std::size_t>& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  /// Sections and keys in sorted order.
  std::string to_ini() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace slidewin
