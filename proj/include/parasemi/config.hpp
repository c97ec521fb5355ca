#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace parasemi {

/// Flat `key = value` configuration with `#` comments. Every lookup records
/// the effective value (explicit or default) so that the resolved set can be
/// echoed into a manifest and re-ingested verbatim.
class Config {
 public:
  static Config parse_text(const std::string& text);
  /// `.json` files are read as manifests (their "config" object); anything
  /// else as flat text.
  static Config from_file(const std::filesystem::path& file);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  double get_double(const std::string& key, double def);
  long get_int(const std::string& key, long def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  std::string get_string(const std::string& key, const std::string& def);
  /// Comma-separated numbers.
  std::vector<double> get_vec(const std::string& key, const std::vector<double>& def);
  bool get_bool(const std::string& key, bool def);

  /// Throws a parse error naming the first key outside `allowed`.
  void restrict_to(const std::vector<std::string>& allowed) const;

  /// Raw entries merged with every default that was looked up.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  const std::map<std::string, std::string>& raw() const { return raw_; }

 private:
  const std::string* lookup(const std::string& key);
  std::map<std::string, std::string> raw_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace parasemi
