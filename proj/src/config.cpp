#include "polardyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "polardyn/error.hpp"

namespace polardyn {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCategory::Parse,
                std::string(what) + ": expected a number, got '" + std::string(t) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  std::int64_t value = 0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCategory::Parse,
                std::string(what) + ": expected an integer, got '" + std::string(t) + "'");
  }
  return value;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

bool valid_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw Error(ErrorCategory::Parse, where + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) throw Error(ErrorCategory::Parse, where + ": invalid key '" + key + "'");
    if (cfg.has(key)) throw Error(ErrorCategory::Parse, where + ": duplicate key '" + key + "'");
    cfg.entries_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  if (!valid_key(key)) throw Error(ErrorCategory::Usage, "invalid config key '" + key + "'");
  entries_[key] = std::move(value);
}

void KeyValueConfig::set_assignment(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCategory::Usage,
                "expected key=value, got '" + std::string(assignment) + "'");
  }
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCategory::Config, "missing config key '" + key + "'");
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  try {
    return parse_double(get(key), key);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::Parse) throw Error(ErrorCategory::Config, e.what());
    throw;
  }
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  try {
    return parse_int(get(key), key);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::Parse) throw Error(ErrorCategory::Config, e.what());
    throw;
  }
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key) const {
  const std::string_view t = trim(get(key));
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCategory::Config,
                key + ": expected a non-negative integer, got '" + std::string(t) + "'");
  }
  return value;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCategory::Config, key + ": expected true or false, got '" + v + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(get(key), ',')) {
    try {
      out.push_back(parse_double(item, key));
    } catch (const Error& e) {
      throw Error(ErrorCategory::Config, e.what());
    }
  }
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
  return split(get(key), ',');
}

std::vector<std::vector<double>> KeyValueConfig::get_matrix(const std::string& key) const {
  std::vector<std::vector<double>> rows;
  for (const auto& row_text : split(get(key), ';')) {
    std::vector<double> row;
    for (const auto& item : split(row_text, ',')) {
      try {
        row.push_back(parse_double(item, key));
      } catch (const Error& e) {
        throw Error(ErrorCategory::Config, e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCategory::Config, key + ": matrix rows have unequal length");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

KeyValueConfig resolve(const ConfigSchema& schema, const KeyValueConfig& user) {
  KeyValueConfig out;
  for (const auto& [k, v] : user.entries()) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ConfigKey& key) { return key.name == k; });
    if (!known) {
      std::string names;
      for (const auto& key : schema) names += (names.empty() ? "" : ", ") + key.name;
      throw Error(ErrorCategory::Config, "unknown config key '" + k + "' (known: " + names + ")");
    }
    out.set(k, v);
  }
  for (const auto& key : schema) {
    if (!out.has(key.name) && !key.default_value.empty()) out.set(key.name, key.default_value);
  }
  return out;
}

std::uint64_t config_hash(const KeyValueConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : config.to_string()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace polardyn
