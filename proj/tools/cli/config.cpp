#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace catqfi::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  const auto t = trim(s);
  double v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw UsageError(what + ": '" + s + "' is not a number");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const auto t = trim(s);
  int v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw UsageError(what + ": '" + s + "' is not an integer");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (auto& kv : parameters) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  parameters.emplace_back(key, value);
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    auto key = trim(t.substr(0, eq));
    auto value = trim(t.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": config files do not nest");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> prefix;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    for (const auto& [k, v] : read_config_file(path)) {
      prefix.push_back("--" + k);
      prefix.push_back(v);
    }
  }
  prefix.insert(prefix.end(), args.begin(), args.end());
  return prefix;
}

Range parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("range '" + text + "' is not min:max:points");
  Range r{to_double(parts[0], "range min"), to_double(parts[1], "range max"), to_int(parts[2], "range points")};
  if (!(r.min > 0.0) || !(r.max >= r.min) || r.points < 1 || (r.points == 1 && r.max != r.min))
    throw UsageError("range '" + text + "' needs 0 < min <= max and points >= 1");
  return r;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (const auto& p : split(text, ',')) out.push_back(to_int(p, "list entry"));
  return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  for (auto& p : split(text, ','))
    if (!p.empty()) out.push_back(p);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace catqfi::cli
