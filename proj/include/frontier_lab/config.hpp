#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace frontier_lab {

/// Sectioned key-value configuration in a TOML subset: `[section]` headers,
/// `key = value` lines with numbers, booleans, "strings" and flat numeric
/// arrays, and `#` comments. Keys are addressed as `section.key`.
///
/// Every config starts from `Config::defaults()`; files and overrides may
/// only assign keys that exist there, with a value of the same type.
class Config {
 public:
  using Value = std::variant<bool, double, std::string, std::vector<double>>;

  static Config defaults();

  /// Applies a file on top of this config. Throws UsageError on unknown keys,
  /// type mismatches or syntax errors (with file and line).
  void merge_file(const std::filesystem::path& path);
  void merge_text(std::string_view text, std::string_view source);

  /// `section.key=value` with the same value grammar as the file format.
  void apply_override(std::string_view assignment);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  bool was_set(const std::string& key) const { return explicitly_set_.count(key) != 0; }

  double number(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  void set(const std::string& key, Value value);

  std::vector<std::string> keys() const;

  /// Nested {section: {key: value}} tree.
  nlohmann::json to_json() const;

 private:
  void assign(const std::string& key, std::string_view literal, std::string_view where);
  const Value& at(const std::string& key) const;

  std::map<std::string, Value> values_;
  std::map<std::string, bool> explicitly_set_;
};

}  // namespace frontier_lab
