// Copyright 2026 The tfim-datasets Authors
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
#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace tfim {

/// Malformed input file. `line()` is 1-based; 0 when the problem is not tied to a line.
class DataError : public std::runtime_error {
public:
  DataError(const std::string &file, std::size_t line, const std::string &what)
      : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " +
                           what),
        line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

namespace csv {

/// 17 significant digits: enough for an exact binary64 round trip.
inline std::string format(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{})
    throw std::runtime_error("csv::format: to_chars failed");
  return {buf, end};
}

inline std::string format(std::uint64_t v) { return std::to_string(v); }

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(std::string_view cell, const std::string &file, std::size_t line) {
  double v = 0.0;
  const char *first = cell.data();
  const char *last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc::result_out_of_range)
    throw DataError(file, line, "value out of range '" + std::string(cell) + "'");
  if (cell.empty() || ptr != last || ec != std::errc{})
    throw DataError(file, line, "non-numeric cell '" + std::string(cell) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view cell, const std::string &file, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
    throw DataError(file, line, "expected a non-negative integer, got '" + std::string(cell) + "'");
  return v;
}

/// Reads every line (LF or CRLF) of a text file.
inline std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError(path.string(), 0, "cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

/// Writes `body` to `path` through a sibling temporary file and a rename, so a
/// failed write never leaves a truncated file behind.
inline void write_file_atomic(const std::filesystem::path &path, std::string_view body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out)
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

} // namespace csv
} // namespace tfim
