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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tfim/csv.hpp"
#include "tfim/sampler.hpp"

namespace tfim {

/// One-pass mean/variance (Welford), plus min and max.
class RunningStats {
public:
  void push(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }

  [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  /// Unbiased (n - 1) variance; 0 for fewer than two values.
  [[nodiscard]] double variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  [[nodiscard]] double standard_error() const noexcept {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  [[nodiscard]] double min() const noexcept { return min_; }
  [[nodiscard]] double max() const noexcept { return max_; }

private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

enum class Quantity { Energy, Magnetization, Entropy };

inline constexpr std::array<Quantity, 3> kQuantities{Quantity::Energy, Quantity::Magnetization,
                                                     Quantity::Entropy};

inline std::string_view to_string(Quantity q) {
  switch (q) {
  case Quantity::Energy:
    return "energy";
  case Quantity::Magnetization:
    return "magnetization";
  case Quantity::Entropy:
    return "entropy";
  }
  return "?";
}

inline double value_of(const SampleRecord &r, Quantity q) {
  switch (q) {
  case Quantity::Energy:
    return r.energy;
  case Quantity::Magnetization:
    return r.magnetization;
  case Quantity::Entropy:
    return r.entropy;
  }
  return 0.0;
}

struct SummaryRow {
  double h = 0.0;
  std::array<RunningStats, 3> stats; // indexed like kQuantities

  [[nodiscard]] const RunningStats &operator[](Quantity q) const {
    return stats[static_cast<std::size_t>(q)];
  }
};

struct SummaryTable {
  std::size_t n_sites = 0;
  std::vector<SummaryRow> rows; // ascending h
};

/// Field values in the order they first appear in the dataset.
inline std::vector<double> distinct_h(const Dataset &ds) {
  std::vector<double> hs;
  for (const auto &r : ds.records)
    if (hs.empty() || hs.back() != r.h)
      if (std::find(hs.begin(), hs.end(), r.h) == hs.end())
        hs.push_back(r.h);
  return hs;
}

inline SummaryTable summarize(const Dataset &ds) {
  if (ds.records.empty())
    throw std::invalid_argument("summarize: empty dataset");
  SummaryTable t;
  t.n_sites = ds.n_sites;
  std::map<double, std::size_t> row_of;
  for (double h : distinct_h(ds))
    row_of.emplace(h, 0);
  for (auto &[h, idx] : row_of) {
    idx = t.rows.size();
    t.rows.push_back({h, {}});
  }
  for (const auto &r : ds.records) {
    auto &row = t.rows[row_of.at(r.h)];
    for (std::size_t q = 0; q < kQuantities.size(); ++q)
      row.stats[q].push(value_of(r, kQuantities[q]));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Correlations
// ---------------------------------------------------------------------------

struct CorrelationRow {
  std::size_t distance = 0;
  double connected = 0.0;
  double raw = 0.0;
  std::uint64_t count = 0;
  /// Standard error of `connected` over states; NaN when the source lacks second moments.
  double connected_std_error = std::numeric_limits<double>::quiet_NaN();
};

struct CorrelationTable {
  std::size_t n_spins = 0;
  std::vector<CorrelationRow> rows; // one per distance
  /// by_h[h_index][distance_index]
  std::vector<double> h_values;
  std::vector<std::vector<CorrelationRow>> by_h;
};

/// Averages the per-state correlators uniformly over samples and field values.
inline CorrelationTable correlation_table(const CorrelatorAccumulator &acc) {
  if (!acc.complete())
    throw std::invalid_argument("correlation_table: accumulator is incomplete");
  CorrelationTable t;
  t.n_spins = acc.n_spins();
  t.h_values = acc.h_values();
  t.by_h.resize(acc.h_values().size());
  for (std::size_t di = 0; di < acc.distances().size(); ++di) {
    CorrelationRow total{acc.distances()[di], 0.0, 0.0, 0, 0.0};
    double sq = 0.0;
    for (std::size_t hi = 0; hi < acc.h_values().size(); ++hi) {
      const auto &c = acc.cell(hi, di);
      total.connected += c.connected_sum;
      total.raw += c.raw_sum;
      total.count += c.count;
      sq += c.connected_sq_sum;
      CorrelationRow cell{acc.distances()[di], c.connected_mean(), c.raw_mean(), c.count};
      if (acc.has_second_moment() && c.count > 1) {
        const double n = static_cast<double>(c.count);
        const double var = (c.connected_sq_sum - n * cell.connected * cell.connected) / (n - 1);
        cell.connected_std_error = std::sqrt(std::max(var, 0.0) / n);
      }
      t.by_h[hi].push_back(cell);
    }
    const double n = static_cast<double>(total.count);
    total.connected /= n;
    total.raw /= n;
    if (acc.has_second_moment() && total.count > 1) {
      const double var = (sq - n * total.connected * total.connected) / (n - 1);
      total.connected_std_error = std::sqrt(std::max(var, 0.0) / n);
    } else {
      total.connected_std_error = std::numeric_limits<double>::quiet_NaN();
    }
    t.rows.push_back(total);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

enum class Stencil { Central, Forward, Backward, CopiedInterior };

inline std::string_view to_string(Stencil s) {
  switch (s) {
  case Stencil::Central:
    return "central";
  case Stencil::Forward:
    return "forward";
  case Stencil::Backward:
    return "backward";
  case Stencil::CopiedInterior:
    return "copied";
  }
  return "?";
}

struct DerivativePoint {
  double h = 0.0;
  double value = 0.0;
  Stencil stencil = Stencil::Central;
};

struct DerivativeSeries {
  int order = 1;
  double step = 0.0;
  std::vector<DerivativePoint> points;
};

/// d/dh (order 1) or d^2/dh^2 (order 2) of a series sampled on a uniform grid.
///
/// Interior points use the three-point central stencil. For order 1 the ends
/// use the second-order one-sided stencils (-3f0 + 4f1 - f2) / 2dh and its
/// mirror; for order 2 the ends copy the adjacent interior value and are
/// marked `CopiedInterior`.
inline DerivativeSeries finite_difference(std::span<const double> h, std::span<const double> f,
                                          int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("finite_difference: order must be 1 or 2");
  if (h.size() != f.size())
    throw std::invalid_argument("finite_difference: h and values differ in length");
  const std::size_t n = h.size();
  if (n < 3)
    throw std::invalid_argument("finite_difference: need at least 3 points, got " +
                                std::to_string(n));
  const double dh = (h[n - 1] - h[0]) / static_cast<double>(n - 1);
  if (!(dh > 0.0))
    throw std::invalid_argument("finite_difference: h must be strictly ascending");
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((h[k] - h[k - 1]) - dh) > 1e-9)
      throw std::invalid_argument("finite_difference: non-uniform grid at index " +
                                  std::to_string(k));

  DerivativeSeries s{order, dh, std::vector<DerivativePoint>(n)};
  for (std::size_t k = 0; k < n; ++k)
    s.points[k].h = h[k];
  for (std::size_t k = 1; k + 1 < n; ++k)
    s.points[k].value = order == 1 ? (f[k + 1] - f[k - 1]) / (2.0 * dh)
                                   : (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (dh * dh);
  if (order == 1) {
    s.points[0] = {h[0], (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dh), Stencil::Forward};
    s.points[n - 1] = {h[n - 1], (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dh),
                       Stencil::Backward};
  } else {
    s.points[0] = {h[0], s.points[1].value, Stencil::CopiedInterior};
    s.points[n - 1] = {h[n - 1], s.points[n - 2].value, Stencil::CopiedInterior};
  }
  return s;
}

/// Derivative of the per-h mean energy.
inline DerivativeSeries mean_energy_derivative(const SummaryTable &t, int order) {
  std::vector<double> h, e;
  for (const auto &row : t.rows) {
    h.push_back(row.h);
    e.push_back(row[Quantity::Energy].mean());
  }
  return finite_difference(h, e, order);
}

/// Energy tracks formed by pairing records with equal sample_index across
/// field values, each differentiated with the same stencils. Element k is the
/// track of sample index k.
inline std::vector<DerivativeSeries> paired_sample_derivative(const Dataset &ds, int order) {
  if (ds.records.empty())
    throw std::invalid_argument("paired_sample_derivative: empty dataset");
  auto hs = distinct_h(ds);
  std::sort(hs.begin(), hs.end());
  std::map<double, std::size_t> h_index;
  for (std::size_t k = 0; k < hs.size(); ++k)
    h_index[hs[k]] = k;

  std::vector<std::size_t> per_h(hs.size(), 0);
  for (const auto &r : ds.records)
    ++per_h[h_index[r.h]];
  const std::size_t samples = per_h.front();
  if (std::any_of(per_h.begin(), per_h.end(), [&](std::size_t c) { return c != samples; }))
    throw std::invalid_argument("paired_sample_derivative: ragged sample counts across h");

  constexpr double unset = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> tracks(samples, std::vector<double>(hs.size(), unset));
  for (const auto &r : ds.records) {
    if (r.sample_index >= samples)
      throw std::invalid_argument("paired_sample_derivative: sample_index " +
                                  std::to_string(r.sample_index) + " out of range");
    auto &slot = tracks[r.sample_index][h_index[r.h]];
    if (!std::isnan(slot))
      throw std::invalid_argument("paired_sample_derivative: duplicate sample_index");
    slot = r.energy;
  }
  std::vector<DerivativeSeries> out;
  out.reserve(samples);
  for (const auto &t : tracks)
    out.push_back(finite_difference(hs, t, order));
  return out;
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

struct Histogram {
  std::string quantity;
  std::vector<double> edges; // bin_count + 1, uniform
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  [[nodiscard]] std::uint64_t total() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts)
      s += c;
    return s;
  }
};

/// Uniform bins over [min, max] of the data; the maximum lands in the last bin.
/// Constant input puts everything in the first bin.
inline Histogram histogram(std::span<const double> values, std::size_t bin_count,
                           std::string quantity = {}) {
  if (values.empty())
    throw std::invalid_argument("histogram: empty input");
  if (bin_count < 1)
    throw std::invalid_argument("histogram: bin_count must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bin_count);

  Histogram hist{std::move(quantity), std::vector<double>(bin_count + 1),
                 std::vector<std::uint64_t>(bin_count, 0)};
  for (std::size_t k = 0; k <= bin_count; ++k)
    hist.edges[k] = lo + static_cast<double>(k) * width;
  hist.edges[bin_count] = hi;
  for (double v : values) {
    std::size_t bin = 0;
    if (width > 0.0)
      bin = std::min(static_cast<std::size_t>((v - lo) / width), bin_count - 1);
    ++hist.counts[bin];
  }
  return hist;
}

inline std::vector<double> column(const Dataset &ds, Quantity q) {
  std::vector<double> out;
  out.reserve(ds.records.size());
  for (const auto &r : ds.records)
    out.push_back(value_of(r, q));
  return out;
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

inline std::string format_summary(const SummaryTable &t) {
  std::string out = "h,quantity,mean,variance,min,max,count\n";
  for (const auto &row : t.rows)
    for (auto q : kQuantities) {
      const auto &s = row[q];
      out += csv::format(row.h) + ',' + std::string(to_string(q)) + ',' + csv::format(s.mean()) +
             ',' + csv::format(s.variance()) + ',' + csv::format(s.min()) + ',' +
             csv::format(s.max()) + ',' + std::to_string(s.count()) + '\n';
    }
  return out;
}

inline std::string format_histogram(const Histogram &h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out += csv::format(h.edges[k]) + ',' + csv::format(h.edges[k + 1]) + ',' +
           std::to_string(h.counts[k]) + '\n';
  return out;
}

inline std::string format_derivative(const DerivativeSeries &s, std::string_view column_name) {
  std::string out = "h," + std::string(column_name) + ",stencil\n";
  for (const auto &p : s.points)
    out += csv::format(p.h) + ',' + csv::format(p.value) + ',' + std::string(to_string(p.stencil)) +
           '\n';
  return out;
}

inline std::string format_correlation_table(const CorrelationTable &t) {
  std::string out = "n_spins,distance,connected,raw,count\n";
  for (const auto &r : t.rows)
    out += std::to_string(t.n_spins) + ',' + std::to_string(r.distance) + ',' +
           csv::format(r.connected) + ',' + csv::format(r.raw) + ',' + std::to_string(r.count) +
           '\n';
  return out;
}

/// Everything `emit_plot_data` writes. Derivatives need >= 3 field values and
/// correlations need a correlation file, so both are optional.
struct AnalysisBundle {
  SummaryTable summary;
  std::vector<Histogram> histograms;
  std::optional<DerivativeSeries> first_derivative;
  std::optional<DerivativeSeries> second_derivative;
  std::optional<Histogram> per_sample_first_derivative;
  std::optional<CorrelationTable> correlations;
};

inline AnalysisBundle analyze(const Dataset &ds, std::size_t bins,
                              const CorrelatorAccumulator *correlators = nullptr) {
  AnalysisBundle b;
  b.summary = summarize(ds);
  for (auto q : kQuantities)
    b.histograms.push_back(histogram(column(ds, q), bins, std::string(to_string(q))));
  if (b.summary.rows.size() >= 3) {
    b.first_derivative = mean_energy_derivative(b.summary, 1);
    b.second_derivative = mean_energy_derivative(b.summary, 2);
    std::vector<double> slopes;
    for (const auto &track : paired_sample_derivative(ds, 1))
      for (const auto &p : track.points)
        slopes.push_back(p.value);
    b.per_sample_first_derivative = histogram(slopes, bins, "dEdH");
  }
  if (correlators)
    b.correlations = correlation_table(*correlators);
  return b;
}

/// Writes one CSV per figure family into `out_dir`; returns the paths written.
inline std::vector<std::filesystem::path> emit_plot_data(const AnalysisBundle &b,
                                                         const std::filesystem::path &out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory '" + out_dir.string() + "'");

  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string &name, const std::string &body) {
    const auto p = out_dir / name;
    csv::write_file_atomic(p, body);
    written.push_back(p);
  };

  const auto n = std::to_string(b.summary.n_sites);
  std::string energy = "h,mean_energy,std_error\n", mag = "h,mean_magnetization,std_error\n",
              ent = "h,mean_entropy,std_error\n", var = "n_spins,h,energy_variance\n";
  for (const auto &row : b.summary.rows) {
    const auto h = csv::format(row.h);
    energy += h + ',' + csv::format(row[Quantity::Energy].mean()) + ',' +
              csv::format(row[Quantity::Energy].standard_error()) + '\n';
    mag += h + ',' + csv::format(row[Quantity::Magnetization].mean()) + ',' +
           csv::format(row[Quantity::Magnetization].standard_error()) + '\n';
    ent += h + ',' + csv::format(row[Quantity::Entropy].mean()) + ',' +
           csv::format(row[Quantity::Entropy].standard_error()) + '\n';
    var += n + ',' + h + ',' + csv::format(row[Quantity::Energy].variance()) + '\n';
  }
  put("mean_energy_vs_h.csv", energy);
  put("mean_magnetization_vs_h.csv", mag);
  put("mean_entropy_vs_h.csv", ent);
  put("energy_variance_vs_n.csv", var);
  for (const auto &h : b.histograms)
    put("hist_" + h.quantity + ".csv", format_histogram(h));
  if (b.first_derivative)
    put("dEdH_vs_h.csv", format_derivative(*b.first_derivative, "dEdH"));
  if (b.second_derivative)
    put("d2EdH2_vs_h.csv", format_derivative(*b.second_derivative, "d2EdH2"));
  if (b.per_sample_first_derivative)
    put("hist_dEdH.csv", format_histogram(*b.per_sample_first_derivative));
  if (b.correlations)
    put("correlation_vs_distance.csv", format_correlation_table(*b.correlations));
  return written;
}

} // namespace tfim
