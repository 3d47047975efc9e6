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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tfim {

/// Unordered nearest-neighbour pair (first < second). Periodic wraparound on a
/// torus dimension of length 2 joins the same pair twice; that is folded into
/// `multiplicity` instead of being listed twice.
struct Bond {
  std::size_t first = 0;
  std::size_t second = 0;
  int multiplicity = 1;

  friend bool operator==(const Bond &, const Bond &) = default;
};

/// Periodic square lattice with row-major site indexing (site = r * cols + c).
class Lattice {
public:
  Lattice() = default;

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t n_sites() const noexcept { return rows_ * cols_; }
  [[nodiscard]] const std::vector<Bond> &bonds() const noexcept { return bonds_; }

  [[nodiscard]] std::size_t site(std::size_t r, std::size_t c) const noexcept {
    return r * cols_ + c;
  }

  /// Number of bonds touching `s`, counted with multiplicity.
  [[nodiscard]] int degree(std::size_t s) const noexcept {
    int d = 0;
    for (const auto &b : bonds_)
      if (b.first == s || b.second == s)
        d += b.multiplicity;
    return d;
  }

  /// Same geometry with every multiplicity forced to 1.
  [[nodiscard]] Lattice deduplicated() const {
    Lattice out = *this;
    for (auto &b : out.bonds_)
      b.multiplicity = 1;
    return out;
  }

  friend bool operator==(const Lattice &, const Lattice &) = default;

private:
  friend Lattice build_lattice(std::size_t rows, std::size_t cols);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Bond> bonds_;
};

/// Builds the periodic rows x cols lattice. Each site links to its right and
/// down neighbour with wraparound; a dimension of length 1 adds no bonds along
/// it, and coinciding pairs fold into multiplicity.
inline Lattice build_lattice(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw std::invalid_argument("build_lattice: need rows*cols >= 2, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  Lattice lat;
  lat.rows_ = rows;
  lat.cols_ = cols;

  // Insertion order of first occurrence keeps the bond list deterministic.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b)
      return;
    auto key = std::minmax(a, b);
    auto [it, inserted] = slot.try_emplace({key.first, key.second}, lat.bonds_.size());
    if (inserted)
      lat.bonds_.push_back(Bond{key.first, key.second, 1});
    else
      ++lat.bonds_[it->second].multiplicity;
  };

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t s = r * cols + c;
      if (cols > 1)
        add(s, r * cols + (c + 1) % cols);
      if (rows > 1)
        add(s, ((r + 1) % rows) * cols + c);
    }
  }
  return lat;
}

enum class DistanceMetric {
  /// |i - j| on the row-major site index.
  LinearIndex,
  /// Manhattan distance with periodic wraparound in both directions.
  ToroidalManhattan,
};

inline std::string_view to_string(DistanceMetric m) {
  return m == DistanceMetric::LinearIndex ? "linear" : "toroidal";
}

inline DistanceMetric parse_distance_metric(std::string_view s) {
  if (s == "linear")
    return DistanceMetric::LinearIndex;
  if (s == "toroidal")
    return DistanceMetric::ToroidalManhattan;
  throw std::invalid_argument("unknown distance metric '" + std::string(s) + "'");
}

inline std::size_t site_distance(const Lattice &lat, std::size_t i, std::size_t j,
                                 DistanceMetric metric) {
  if (metric == DistanceMetric::LinearIndex)
    return i > j ? i - j : j - i;
  const auto ri = i / lat.cols(), ci = i % lat.cols();
  const auto rj = j / lat.cols(), cj = j % lat.cols();
  const auto dr = ri > rj ? ri - rj : rj - ri;
  const auto dc = ci > cj ? ci - cj : cj - ci;
  return std::min(dr, lat.rows() - dr) + std::min(dc, lat.cols() - dc);
}

/// Largest distance realised by some pair under `metric`.
inline std::size_t max_distance(const Lattice &lat, DistanceMetric metric) {
  if (metric == DistanceMetric::LinearIndex)
    return lat.n_sites() - 1;
  return lat.rows() / 2 + lat.cols() / 2;
}

struct PairDistanceIndex {
  std::size_t distance = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// All pairs (i, j), i < j, separated by `d` under `metric`, ascending in i then j.
inline PairDistanceIndex pairs_at_distance(const Lattice &lat, std::size_t d,
                                           DistanceMetric metric = DistanceMetric::LinearIndex) {
  const std::size_t hi = max_distance(lat, metric);
  if (d < 1 || d > hi)
    throw std::out_of_range("pairs_at_distance: distance " + std::to_string(d) +
                            " outside [1, " + std::to_string(hi) + "]");
  PairDistanceIndex out{d, {}};
  const std::size_t n = lat.n_sites();
  if (metric == DistanceMetric::LinearIndex) {
    for (std::size_t i = 0; i + d < n; ++i)
      out.pairs.emplace_back(i, i + d);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (site_distance(lat, i, j, metric) == d)
        out.pairs.emplace_back(i, j);
  return out;
}

} // namespace tfim
