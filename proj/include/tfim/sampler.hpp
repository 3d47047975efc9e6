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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tfim/csv.hpp"
#include "tfim/entanglement.hpp"
#include "tfim/lattice.hpp"
#include "tfim/operators.hpp"
#include "tfim/states.hpp"
#include "tfim/version.hpp"

namespace tfim {

/// Uniform grid h_min, h_min + step, ..., up to h_max (inclusive when it lands on the grid).
inline std::vector<double> make_h_grid(double h_min, double h_max, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("h grid: step must be positive");
  if (!(h_max >= h_min))
    throw std::invalid_argument("h grid: h_max must be >= h_min");
  const auto n = static_cast<std::size_t>(std::floor((h_max - h_min) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = h_min + static_cast<double>(k) * step;
  return out;
}

struct SweepConfig {
  std::size_t rows = 2;
  std::size_t cols = 2;
  double coupling_J = 1.0;
  std::vector<double> h_values = make_h_grid(1.0, 5.0, 0.25);
  std::size_t samples_per_h = 5000;
  std::uint64_t master_seed = 0;
  BondMode bond_mode = BondMode::Honored;
  StateMode state_mode = StateMode::Haar;
  bool record_correlators = true;
  DistanceMetric distance_metric = DistanceMetric::LinearIndex;

  [[nodiscard]] std::size_t n_sites() const noexcept { return rows * cols; }

  [[nodiscard]] Lattice lattice() const {
    auto lat = build_lattice(rows, cols);
    return bond_mode == BondMode::Dedup ? lat.deduplicated() : lat;
  }

  void validate() const {
    if (rows < 1 || cols < 1 || rows * cols < 2)
      throw std::invalid_argument("sweep: lattice must have at least 2 sites");
    if (n_sites() % 2 != 0)
      throw std::invalid_argument("sweep: half-split entropy needs an even number of sites");
    if (n_sites() > kMaxSites)
      throw std::invalid_argument("sweep: too many sites");
    if (h_values.empty())
      throw std::invalid_argument("sweep: h_values is empty");
    for (std::size_t k = 1; k < h_values.size(); ++k)
      if (!(h_values[k] > h_values[k - 1]))
        throw std::invalid_argument("sweep: h_values must be strictly ascending");
    if (samples_per_h < 1)
      throw std::invalid_argument("sweep: samples_per_h must be >= 1");
    if (samples_per_h > 0xffffffffULL)
      throw std::invalid_argument("sweep: samples_per_h exceeds the stream id range");
  }

  friend bool operator==(const SweepConfig &, const SweepConfig &) = default;
};

struct SampleRecord {
  double h = 0.0;
  std::uint64_t sample_index = 0;
  std::uint64_t stream_id = 0;
  double energy = 0.0;
  double magnetization = 0.0;
  double entropy = 0.0;
  std::vector<double> site_z;

  friend bool operator==(const SampleRecord &, const SampleRecord &) = default;
};

struct Dataset {
  std::size_t n_sites = 0;
  std::vector<SampleRecord> records;

  friend bool operator==(const Dataset &, const Dataset &) = default;
};

/// Per (h, distance) running sums of the per-state, pair-averaged correlators
///   connected: <Z_i Z_j> - <Z_i><Z_j>
///   raw:       <Z_i Z_j>
class CorrelatorAccumulator {
public:
  struct Cell {
    double connected_sum = 0.0;
    double connected_sq_sum = 0.0;
    double raw_sum = 0.0;
    std::uint64_t count = 0;

    [[nodiscard]] double connected_mean() const { return connected_sum / static_cast<double>(count); }
    [[nodiscard]] double raw_mean() const { return raw_sum / static_cast<double>(count); }
  };

  CorrelatorAccumulator() = default;
  CorrelatorAccumulator(std::size_t n_spins, std::vector<double> h_values,
                        std::vector<std::size_t> distances, std::uint64_t expected_per_h,
                        bool has_second_moment = true)
      : n_spins_(n_spins), h_values_(std::move(h_values)), distances_(std::move(distances)),
        expected_per_h_(expected_per_h), has_second_moment_(has_second_moment),
        cells_(h_values_.size() * distances_.size()) {}

  void add(std::size_t h_index, std::span<const double> connected, std::span<const double> raw) {
    if (connected.size() != distances_.size() || raw.size() != distances_.size())
      throw std::invalid_argument("CorrelatorAccumulator::add: wrong number of distances");
    for (std::size_t d = 0; d < distances_.size(); ++d) {
      auto &c = cell(h_index, d);
      c.connected_sum += connected[d];
      c.connected_sq_sum += connected[d] * connected[d];
      c.raw_sum += raw[d];
      ++c.count;
    }
  }

  [[nodiscard]] Cell &cell(std::size_t h_index, std::size_t d_index) {
    return cells_.at(h_index * distances_.size() + d_index);
  }
  [[nodiscard]] const Cell &cell(std::size_t h_index, std::size_t d_index) const {
    return cells_.at(h_index * distances_.size() + d_index);
  }

  [[nodiscard]] std::size_t n_spins() const noexcept { return n_spins_; }
  [[nodiscard]] const std::vector<double> &h_values() const noexcept { return h_values_; }
  [[nodiscard]] const std::vector<std::size_t> &distances() const noexcept { return distances_; }
  [[nodiscard]] std::uint64_t expected_per_h() const noexcept { return expected_per_h_; }
  /// False when rebuilt from a correlation file, which stores means only.
  [[nodiscard]] bool has_second_moment() const noexcept { return has_second_moment_; }

  [[nodiscard]] bool complete() const noexcept {
    return !cells_.empty() && std::all_of(cells_.begin(), cells_.end(), [&](const Cell &c) {
      return c.count == expected_per_h_ && c.count > 0;
    });
  }

  friend bool operator==(const CorrelatorAccumulator &a, const CorrelatorAccumulator &b) {
    if (a.n_spins_ != b.n_spins_ || a.h_values_ != b.h_values_ || a.distances_ != b.distances_ ||
        a.expected_per_h_ != b.expected_per_h_ || a.cells_.size() != b.cells_.size())
      return false;
    for (std::size_t k = 0; k < a.cells_.size(); ++k) {
      const auto &x = a.cells_[k], &y = b.cells_[k];
      if (x.connected_sum != y.connected_sum || x.raw_sum != y.raw_sum || x.count != y.count ||
          x.connected_sq_sum != y.connected_sq_sum)
        return false;
    }
    return true;
  }

private:
  std::size_t n_spins_ = 0;
  std::vector<double> h_values_;
  std::vector<std::size_t> distances_;
  std::uint64_t expected_per_h_ = 0;
  bool has_second_moment_ = true;
  std::vector<Cell> cells_;
};

// ---------------------------------------------------------------------------
// Per-sample observables
// ---------------------------------------------------------------------------

/// Scratch buffers owned by one worker.
struct SampleWorkspace {
  std::vector<cplx> h_psi;
  std::vector<double> z_strings;

  explicit SampleWorkspace(std::size_t n_sites)
      : h_psi(std::size_t{1} << n_sites), z_strings(std::size_t{1} << n_sites) {}
};

struct SampleObservables {
  double energy = 0.0;
  double magnetization = 0.0;
  double entropy = 0.0;
  std::vector<double> site_z;
  /// One entry per distance group, empty when correlators are off.
  std::vector<double> connected;
  std::vector<double> raw;
};

/// Energy (matrix-free), per-site <Z_i>, magnetisation, half-split entropy and,
/// when `pair_groups` is given, the pair-averaged correlators per distance.
/// All Z-string expectations come from one Walsh-Hadamard pass over |psi|^2.
inline SampleObservables observe_sample(const StateVector &psi, const HamiltonianSpec &spec,
                                        const std::vector<PairDistanceIndex> *pair_groups,
                                        SampleWorkspace &ws) {
  const std::size_t n = psi.n_sites();
  SampleObservables obs;
  obs.energy = expectation_energy(psi, spec, ws.h_psi);

  z_string_expectations(psi, ws.z_strings);
  const auto &w = ws.z_strings;
  obs.site_z.resize(n);
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    obs.site_z[i] = w[site_mask(n, i)];
    m += obs.site_z[i];
  }
  obs.magnetization = m / static_cast<double>(n);
  obs.entropy = half_split_entropy(psi);

  if (pair_groups) {
    obs.connected.reserve(pair_groups->size());
    obs.raw.reserve(pair_groups->size());
    for (const auto &group : *pair_groups) {
      double conn = 0.0, raw = 0.0;
      for (const auto &[i, j] : group.pairs) {
        const double zz = w[site_mask(n, i) | site_mask(n, j)];
        raw += zz;
        conn += zz - obs.site_z[i] * obs.site_z[j];
      }
      const auto np = static_cast<double>(group.pairs.size());
      obs.connected.push_back(conn / np);
      obs.raw.push_back(raw / np);
    }
  }
  return obs;
}

/// Every distance realised on the lattice under `metric`, with its pairs.
inline std::vector<PairDistanceIndex> distance_groups(const Lattice &lat, DistanceMetric metric) {
  std::vector<PairDistanceIndex> groups;
  for (std::size_t d = 1; d <= max_distance(lat, metric); ++d) {
    auto g = pairs_at_distance(lat, d, metric);
    if (!g.pairs.empty())
      groups.push_back(std::move(g));
  }
  return groups;
}

struct SweepResult {
  Dataset dataset;
  CorrelatorAccumulator correlators;
};

/// Runs the full (h, sample) grid. Work items are spread over `threads` workers
/// (0 = hardware concurrency); every item draws from its own stream and results
/// are merged in (h-index, sample-index) order, so the output does not depend
/// on the thread count.
inline SweepResult run_sweep(const SweepConfig &config, unsigned threads = 0) {
  config.validate();
  const Lattice lat = config.lattice();
  const std::size_t n = lat.n_sites();
  const std::size_t n_h = config.h_values.size();
  const std::size_t per_h = config.samples_per_h;
  const std::size_t total = n_h * per_h;

  std::vector<HamiltonianSpec> hamiltonians;
  hamiltonians.reserve(n_h);
  for (double h : config.h_values)
    hamiltonians.emplace_back(lat, config.coupling_J, h, config.bond_mode);

  const auto groups = distance_groups(lat, config.distance_metric);
  std::vector<std::size_t> distances;
  for (const auto &g : groups)
    distances.push_back(g.distance);
  const std::size_t n_d = config.record_correlators ? groups.size() : 0;

  SweepResult result;
  result.dataset.n_sites = n;
  result.dataset.records.resize(total);
  std::vector<double> connected(total * n_d), raw(total * n_d);

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  // Parallelism lives in the worker pool; keep BLAS calls single-threaded.
  openblas_set_num_threads(1);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      SampleWorkspace ws(n);
      for (std::size_t item = next++; item < total; item = next++) {
        const std::size_t hi = item / per_h, si = item % per_h;
        const RngStream stream{config.master_seed, RngStream::id_for(hi, si)};
        const auto psi = random_state(n, stream, config.state_mode);
        auto obs = observe_sample(psi, hamiltonians[hi],
                                  config.record_correlators ? &groups : nullptr, ws);
        auto &rec = result.dataset.records[item];
        rec = {config.h_values[hi], si,          stream.stream_id,       obs.energy,
               obs.magnetization,   obs.entropy, std::move(obs.site_z)};
        std::copy(obs.connected.begin(), obs.connected.end(), connected.begin() + item * n_d);
        std::copy(obs.raw.begin(), obs.raw.end(), raw.begin() + item * n_d);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure)
        failure = std::current_exception();
      next = total;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t)
      pool.emplace_back(worker);
    worker();
  }
  if (failure)
    std::rethrow_exception(failure);

  result.correlators = CorrelatorAccumulator(n, config.h_values,
                                             config.record_correlators ? distances
                                                                       : std::vector<std::size_t>{},
                                             per_h);
  if (config.record_correlators)
    for (std::size_t item = 0; item < total; ++item)
      result.correlators.add(item / per_h,
                             std::span<const double>(connected).subspan(item * n_d, n_d),
                             std::span<const double>(raw).subspan(item * n_d, n_d));
  return result;
}

// ---------------------------------------------------------------------------
// Dataset file
// ---------------------------------------------------------------------------

inline std::string dataset_header(std::size_t n_sites) {
  std::string h = "h,sample_index,stream_id,energy,magnetization,entropy";
  for (std::size_t i = 0; i < n_sites; ++i)
    h += ",z_" + std::to_string(i);
  return h;
}

inline std::string format_dataset(const Dataset &ds) {
  std::string out = dataset_header(ds.n_sites) + "\n";
  for (const auto &r : ds.records) {
    if (r.site_z.size() != ds.n_sites)
      throw std::invalid_argument("write_dataset: record has wrong number of site values");
    out += csv::format(r.h);
    out += ',' + csv::format(r.sample_index);
    out += ',' + csv::format(r.stream_id);
    out += ',' + csv::format(r.energy);
    out += ',' + csv::format(r.magnetization);
    out += ',' + csv::format(r.entropy);
    for (double z : r.site_z)
      out += ',' + csv::format(z);
    out += '\n';
  }
  return out;
}

inline void write_dataset(const Dataset &ds, const std::filesystem::path &path) {
  csv::write_file_atomic(path, format_dataset(ds));
}

inline Dataset read_dataset(const std::filesystem::path &path) {
  const std::string file = path.string();
  const auto lines = csv::read_lines(path);
  if (lines.empty())
    throw DataError(file, 1, "missing header");
  const auto header = csv::split(lines[0]);
  static constexpr std::string_view fixed[] = {"h",      "sample_index",  "stream_id",
                                               "energy", "magnetization", "entropy"};
  if (header.size() < std::size(fixed) + 1)
    throw DataError(file, 1, "malformed header: too few columns");
  for (std::size_t k = 0; k < std::size(fixed); ++k)
    if (header[k] != fixed[k])
      throw DataError(file, 1,
                      "malformed header: expected '" + std::string(fixed[k]) + "' in column " +
                          std::to_string(k + 1) + ", got '" + std::string(header[k]) + "'");
  Dataset ds;
  ds.n_sites = header.size() - std::size(fixed);
  for (std::size_t i = 0; i < ds.n_sites; ++i)
    if (header[std::size(fixed) + i] != "z_" + std::to_string(i))
      throw DataError(file, 1, "malformed header: expected 'z_" + std::to_string(i) + "'");

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::size_t lineno = ln + 1;
    if (lines[ln].empty() && ln + 1 == lines.size())
      break;
    const auto cells = csv::split(lines[ln]);
    if (cells.size() != header.size())
      throw DataError(file, lineno,
                      "expected " + std::to_string(header.size()) + " columns, got " +
                          std::to_string(cells.size()));
    SampleRecord r;
    r.h = csv::parse_double(cells[0], file, lineno);
    r.sample_index = csv::parse_uint(cells[1], file, lineno);
    r.stream_id = csv::parse_uint(cells[2], file, lineno);
    r.energy = csv::parse_double(cells[3], file, lineno);
    r.magnetization = csv::parse_double(cells[4], file, lineno);
    r.entropy = csv::parse_double(cells[5], file, lineno);
    r.site_z.resize(ds.n_sites);
    for (std::size_t i = 0; i < ds.n_sites; ++i)
      r.site_z[i] = csv::parse_double(cells[std::size(fixed) + i], file, lineno);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Correlation file
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCorrelationHeader =
    "n_spins,h,distance,connected_mean,raw_mean,count";

inline std::string format_correlations(const CorrelatorAccumulator &acc) {
  std::string out = std::string(kCorrelationHeader) + "\n";
  for (std::size_t hi = 0; hi < acc.h_values().size(); ++hi) {
    for (std::size_t di = 0; di < acc.distances().size(); ++di) {
      const auto &c = acc.cell(hi, di);
      out += std::to_string(acc.n_spins()) + ',' + csv::format(acc.h_values()[hi]) + ',' +
             std::to_string(acc.distances()[di]) + ',' +
             (c.count ? csv::format(c.connected_mean()) : "nan") + ',' +
             (c.count ? csv::format(c.raw_mean()) : "nan") + ',' + std::to_string(c.count) + '\n';
    }
  }
  return out;
}

inline void write_correlations(const CorrelatorAccumulator &acc,
                               const std::filesystem::path &path) {
  csv::write_file_atomic(path, format_correlations(acc));
}

/// Rebuilds an accumulator from a correlation file. Sums are mean * count; the
/// second moment is not stored, so standard errors are unavailable.
inline CorrelatorAccumulator read_correlations(const std::filesystem::path &path) {
  const std::string file = path.string();
  const auto lines = csv::read_lines(path);
  if (lines.empty() || lines[0] != kCorrelationHeader)
    throw DataError(file, 1, "malformed header: expected '" + std::string(kCorrelationHeader) + "'");

  struct Row {
    double h;
    std::size_t d;
    double conn, raw;
    std::uint64_t count;
  };
  std::vector<Row> rows;
  std::size_t n_spins = 0;
  std::vector<double> hs;
  std::vector<std::size_t> ds;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::size_t lineno = ln + 1;
    if (lines[ln].empty() && ln + 1 == lines.size())
      break;
    const auto cells = csv::split(lines[ln]);
    if (cells.size() != 6)
      throw DataError(file, lineno, "expected 6 columns, got " + std::to_string(cells.size()));
    const auto n = csv::parse_uint(cells[0], file, lineno);
    if (rows.empty())
      n_spins = n;
    else if (n != n_spins)
      throw DataError(file, lineno, "mixed n_spins values");
    Row r{csv::parse_double(cells[1], file, lineno),
          static_cast<std::size_t>(csv::parse_uint(cells[2], file, lineno)),
          csv::parse_double(cells[3], file, lineno), csv::parse_double(cells[4], file, lineno),
          csv::parse_uint(cells[5], file, lineno)};
    if (std::find(hs.begin(), hs.end(), r.h) == hs.end())
      hs.push_back(r.h);
    if (std::find(ds.begin(), ds.end(), r.d) == ds.end())
      ds.push_back(r.d);
    rows.push_back(r);
  }
  if (rows.empty())
    throw DataError(file, 0, "no correlation rows");
  if (rows.size() != hs.size() * ds.size())
    throw DataError(file, 0, "correlation rows do not form a complete (h, distance) grid");

  CorrelatorAccumulator acc(n_spins, hs, ds, rows.front().count, false);
  for (const auto &r : rows) {
    const auto hi = static_cast<std::size_t>(std::find(hs.begin(), hs.end(), r.h) - hs.begin());
    const auto di = static_cast<std::size_t>(std::find(ds.begin(), ds.end(), r.d) - ds.begin());
    auto &c = acc.cell(hi, di);
    if (c.count != 0)
      throw DataError(file, 0, "duplicate (h, distance) row");
    c.count = r.count;
    c.connected_sum = r.conn * static_cast<double>(r.count);
    c.raw_sum = r.raw * static_cast<double>(r.count);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct RunSummary {
  std::uint64_t records = 0;
  double duration_seconds = 0.0;
};

struct Manifest {
  int schema_version = kSchemaVersion;
  std::string code_version = kVersion;
  SweepConfig config;
  RunSummary summary;
};

namespace detail {

/// Shortest round-trip form, always with a decimal point ("1.0", not "1").
inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

} // namespace detail

inline std::string format_manifest(const SweepConfig &c, const RunSummary &summary) {
  std::ostringstream os;
  std::string hs;
  for (std::size_t k = 0; k < c.h_values.size(); ++k)
    hs += (k ? "," : "") + detail::format_real(c.h_values[k]);
  os << "schema_version=" << kSchemaVersion << '\n'
     << "code_version=" << kVersion << '\n'
     << "rows=" << c.rows << '\n'
     << "cols=" << c.cols << '\n'
     << "n_sites=" << c.n_sites() << '\n'
     << "J=" << detail::format_real(c.coupling_J) << '\n'
     << "h_count=" << c.h_values.size() << '\n'
     << "h_values=" << hs << '\n'
     << "samples=" << c.samples_per_h << '\n'
     << "seed=" << c.master_seed << '\n'
     << "bond_mode=" << to_string(c.bond_mode) << '\n'
     << "state_mode=" << to_string(c.state_mode) << '\n'
     << "record_correlators=" << (c.record_correlators ? "true" : "false") << '\n'
     << "distance_metric=" << to_string(c.distance_metric) << '\n'
     << "records=" << summary.records << '\n'
     << "duration_seconds=" << detail::format_real(summary.duration_seconds) << '\n';
  return os.str();
}

inline void write_manifest(const SweepConfig &c, const RunSummary &summary,
                           const std::filesystem::path &path) {
  csv::write_file_atomic(path, format_manifest(c, summary));
}

inline Manifest read_manifest(const std::filesystem::path &path) {
  const std::string file = path.string();
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  const auto lines = csv::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty() || lines[ln][0] == '#')
      continue;
    const auto eq = lines[ln].find('=');
    if (eq == std::string::npos)
      throw DataError(file, ln + 1, "expected key=value");
    kv[lines[ln].substr(0, eq)] = {lines[ln].substr(eq + 1), ln + 1};
  }
  auto get = [&](const std::string &key) -> const std::pair<std::string, std::size_t> & {
    auto it = kv.find(key);
    if (it == kv.end())
      throw DataError(file, 0, "missing key '" + key + "'");
    return it->second;
  };
  auto uint_of = [&](const std::string &key) {
    const auto &[v, ln] = get(key);
    return csv::parse_uint(v, file, ln);
  };
  auto real_of = [&](const std::string &key) {
    const auto &[v, ln] = get(key);
    return csv::parse_double(v, file, ln);
  };
  auto parsed = [&](const std::string &key, auto parse) {
    const auto &[v, ln] = get(key);
    try {
      return parse(v);
    } catch (const std::invalid_argument &e) {
      throw DataError(file, ln, e.what());
    }
  };

  Manifest m;
  m.schema_version = static_cast<int>(uint_of("schema_version"));
  m.code_version = get("code_version").first;
  auto &c = m.config;
  c.rows = uint_of("rows");
  c.cols = uint_of("cols");
  c.coupling_J = real_of("J");
  c.h_values.clear();
  {
    const auto &[v, ln] = get("h_values");
    for (auto cell : csv::split(v))
      c.h_values.push_back(csv::parse_double(cell, file, ln));
  }
  c.samples_per_h = uint_of("samples");
  c.master_seed = uint_of("seed");
  c.bond_mode = parsed("bond_mode", [](const std::string &s) { return parse_bond_mode(s); });
  c.state_mode = parsed("state_mode", [](const std::string &s) { return parse_state_mode(s); });
  c.distance_metric =
      parsed("distance_metric", [](const std::string &s) { return parse_distance_metric(s); });
  {
    const auto &[v, ln] = get("record_correlators");
    if (v != "true" && v != "false")
      throw DataError(file, ln, "record_correlators must be true or false");
    c.record_correlators = v == "true";
  }
  m.summary.records = uint_of("records");
  m.summary.duration_seconds = real_of("duration_seconds");
  return m;
}

} // namespace tfim
