/*
Copyright 2026 The spartomo Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "spartomo/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spartomo/common.hpp"

namespace spartomo {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string field(const std::string& section, const std::string& key) {
  return section.empty() ? key : "[" + section + "] " + key;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = s.find(',');
    out.push_back(trim(s.substr(0, c)));
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::string source) {
  ConfigFile cfg;
  cfg.source_ = std::move(source);
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto error = [&](const std::string& what) {
    throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) error("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) error("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) error("missing key before '='");
    auto& entries = cfg.sections_[section];
    if (entries.contains(key)) error("duplicate key " + field(section, key));
    entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void ConfigFile::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = Entry{std::move(value), 0};
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError(source_ + ": missing required field " + field(section, key));
  return *e;
}

void ConfigFile::fail(const std::string& section, const std::string& key, const Entry& e,
                      const std::string& what) const {
  const std::string where = e.line > 0 ? source_ + ":" + std::to_string(e.line) : std::string("override");
  throw ConfigError(where + ": " + field(section, key) + ": " + what + ", got '" + e.value + "'");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  const auto v = parse_number<double>(e.value);
  if (!v || !std::isfinite(*v)) fail(section, key, e, "expected a finite number");
  return *v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::optional<double> ConfigFile::get_optional_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return get_double(section, key);
}

int ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  const auto v = parse_number<int>(e.value);
  if (!v) fail(section, key, e, "expected an integer");
  return *v;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const auto v = parse_number<std::uint64_t>(e->value);
  if (!v) fail(section, key, *e, "expected an unsigned integer");
  return *v;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(section, key, *e, "expected true or false");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  for (auto item : split_list(e->value)) {
    const auto v = parse_number<double>(item);
    if (!v || !std::isfinite(*v)) fail(section, key, *e, "expected a comma-separated list of numbers");
    out.push_back(*v);
  }
  return out;
}

std::vector<int> ConfigFile::get_ints(const std::string& section, const std::string& key,
                                      const std::vector<int>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<int> out;
  for (auto item : split_list(e->value)) {
    const auto v = parse_number<int>(item);
    if (!v) fail(section, key, *e, "expected a comma-separated list of integers");
    out.push_back(*v);
  }
  return out;
}

void ConfigFile::require_all_used() const {
  for (const auto& [section, entries] : sections_)
    for (const auto& [key, e] : entries)
      if (!e.used)
        throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown field " + field(section, key));
}

std::string ConfigFile::dump() const {
  std::string out;
  for (const auto& [section, entries] : sections_) {
    if (entries.empty()) continue;
    if (!section.empty()) out += "[" + section + "]\n";
    for (const auto& [key, e] : entries) out += key + " = " + e.value + "\n";
  }
  return out;
}

}  // namespace spartomo
