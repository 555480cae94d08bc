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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spartomo {

// Flat "key = value" text grouped by "[section]" headers. '#' starts a
// comment. Keys before the first header belong to section "". Lookups mark
// entries as used so unknown keys can be reported. Errors are ConfigError
// with "source:line:" or the "[section] key" field name in the message.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text, std::string source = "<string>");
  static ConfigFile load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& section, const std::string& key) const;
  // Overrides or inserts a value; line 0 marks it as not from the file.
  void set(const std::string& section, const std::string& key, std::string value);

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  // Comma-separated lists.
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key, const std::vector<int>& fallback) const;

  // Throws ConfigError naming the first entry that no lookup touched.
  void require_all_used() const;
  // Sorted canonical text; parsing it back gives the same entries.
  std::string dump() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const std::string& section, const std::string& key, const Entry& e,
                         const std::string& what) const;

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace spartomo
