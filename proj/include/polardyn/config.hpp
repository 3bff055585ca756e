#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace polardyn {

// Flat `key = value` documents. Lines starting with '#' and blank lines are
// ignored; keys are [A-Za-z0-9_.-]+; values run to end of line (trimmed).
// Lists are comma separated; matrix rows are separated by ';'.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  // Parses "key=value"; throws Error(Usage) otherwise.
  void set_assignment(std::string_view assignment);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& get(const std::string& key) const;

  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  // Rows separated by ';', entries by ','; all rows must have equal length.
  std::vector<std::vector<double>> get_matrix(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  // Canonical text, keys sorted, one `key = value` per line.
  std::string to_string() const;

 private:
  std::map<std::string, std::string> entries_;
};

struct ConfigKey {
  std::string name;
  std::string default_value;  // empty means "required unless noted in help"
  std::string help;
};

using ConfigSchema = std::vector<ConfigKey>;

// Rejects keys outside the schema and fills in defaults.
KeyValueConfig resolve(const ConfigSchema& schema, const KeyValueConfig& user);

// FNV-1a over the canonical text.
std::uint64_t config_hash(const KeyValueConfig& config);

// Numeric parsing helpers shared by the CSV readers. Throw Error(Parse).
double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace polardyn
