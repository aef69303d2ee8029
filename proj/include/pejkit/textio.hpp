// Copyright 2026 The pejkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small text/CSV utilities shared by the file-format code.

#ifndef PEJKIT_TEXTIO_HPP
#define PEJKIT_TEXTIO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pejkit/error.hpp"

namespace pejkit {

enum class FileFormat { kCsv, kJson };

inline FileFormat file_format_from_string(std::string_view s) {
  if (s == "csv") return FileFormat::kCsv;
  if (s == "json") return FileFormat::kJson;
  throw Error(ErrorKind::kUsage, "unknown format '" + std::string(s) + "' (expected csv or json)");
}

// Decimal with 17 significant digits; parses back to the identical double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

namespace detail {

// "dir/log.csv" and "dir/log" address the same CSV file family.
inline std::filesystem::path csv_stem(const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    std::filesystem::path p = path;
    p.replace_extension();
    return p;
  }
  return path;
}

inline std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
  std::filesystem::path p = stem;
  p += suffix;
  return p;
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::kSchema, "invalid JSON in '" + origin + "'");
  }
  return j;
}

inline double json_number(const nlohmann::json& j, const std::string& key, const std::string& origin) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorKind::kSchema, "missing or non-numeric field '" + key + "' in " + origin);
  }
  return j.at(key).get<double>();
}

inline std::vector<double> json_column(const nlohmann::json& j, const std::string& key,
                                       const std::string& origin) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorKind::kSchema, "missing column '" + key + "' in " + origin);
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& e : j.at(key)) {
    if (!e.is_number()) {
      throw Error(ErrorKind::kSchema, "non-numeric entry in column '" + key + "' of " + origin);
    }
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

}  // namespace pejkit

#endif  // PEJKIT_TEXTIO_HPP
