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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfim/analysis.hpp"
#include "tfim/sampler.hpp"
#include "tfim/version.hpp"

namespace tfim::cli {

namespace fs = std::filesystem;

/// Exit codes: 0 success, 1 runtime or data error, 2 usage error.
enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateOptions {
  std::size_t rows = 0, cols = 0;
  double j = 1.0, h_min = 1.0, h_max = 5.0, h_step = 0.25;
  std::size_t samples = 5000;
  std::uint64_t seed = 0;
  std::string out_dir, state_mode = "haar", bond_mode = "honored", metric = "linear";
  unsigned threads = 0;
  bool no_correlators = false;
};

struct AnalyzeOptions {
  std::string input, out_dir, correlations;
  std::size_t bins = 50;
};

struct CorrelateOptions {
  std::string input, out_dir;
};

struct DeriveOptions {
  std::string input, out_dir;
  int order = 1;
  bool per_sample = false;
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
};

inline fs::path default_out_dir(const std::string &out_dir, const std::string &input) {
  if (!out_dir.empty())
    return out_dir;
  const auto parent = fs::path(input).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

inline void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

/// True when the file exists and holds at least one data row.
inline bool has_rows(const fs::path &p) {
  if (!fs::exists(p))
    return false;
  const auto lines = csv::read_lines(p);
  return std::any_of(lines.begin() + std::min<std::size_t>(1, lines.size()), lines.end(),
                     [](const std::string &l) { return !l.empty(); });
}

inline SweepConfig to_config(const GenerateOptions &o) {
  if (o.h_min > o.h_max)
    throw UsageError("--h-min must not exceed --h-max");
  if (!(o.h_step > 0.0))
    throw UsageError("--h-step must be positive");
  SweepConfig c;
  c.rows = o.rows;
  c.cols = o.cols;
  c.coupling_J = o.j;
  c.h_values = make_h_grid(o.h_min, o.h_max, o.h_step);
  c.samples_per_h = o.samples;
  c.master_seed = o.seed;
  c.state_mode = parse_state_mode(o.state_mode);
  c.bond_mode = parse_bond_mode(o.bond_mode);
  c.distance_metric = parse_distance_metric(o.metric);
  c.record_correlators = !o.no_correlators;
  try {
    c.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  return c;
}

inline int cmd_generate(const GenerateOptions &o, std::ostream &out) {
  const SweepConfig config = to_config(o);
  const fs::path dir = o.out_dir;
  ensure_dir(dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_sweep(config, o.threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_dataset(result.dataset, dir / "dataset.csv");
  write_correlations(result.correlators, dir / "correlations.csv");
  write_manifest(config, {result.dataset.records.size(), seconds}, dir / "manifest.txt");
  out << "wrote " << result.dataset.records.size() << " records to " << dir.string() << " in "
      << std::fixed << std::setprecision(2) << seconds << " s\n";
  return kOk;
}

inline int cmd_analyze(const AnalyzeOptions &o, std::ostream &out) {
  const auto ds = read_dataset(o.input);
  if (ds.records.empty())
    throw std::runtime_error(o.input + ": empty dataset");
  const fs::path dir = default_out_dir(o.out_dir, o.input);
  fs::path corr_path = o.correlations;
  if (corr_path.empty())
    corr_path = fs::path(o.input).parent_path() / "correlations.csv";

  std::optional<CorrelatorAccumulator> acc;
  if (has_rows(corr_path))
    acc = read_correlations(corr_path);
  else if (!o.correlations.empty())
    throw std::runtime_error(o.correlations + ": no correlation rows");

  const auto bundle = analyze(ds, o.bins, acc ? &*acc : nullptr);
  ensure_dir(dir);
  csv::write_file_atomic(dir / "summary.csv", format_summary(bundle.summary));
  const auto files = emit_plot_data(bundle, dir / "plots");
  out << "summarized " << ds.records.size() << " records over " << bundle.summary.rows.size()
      << " field values; wrote " << files.size() + 1 << " files to " << dir.string() << "\n";
  return kOk;
}

inline int cmd_correlate(const CorrelateOptions &o, std::ostream &out) {
  const auto table = correlation_table(read_correlations(o.input));
  const fs::path dir = default_out_dir(o.out_dir, o.input);
  ensure_dir(dir);
  csv::write_file_atomic(dir / "correlation_table.csv", format_correlation_table(table));
  out << "distance  connected  raw  (" << table.n_spins << " spins)\n";
  for (const auto &r : table.rows)
    out << r.distance << "  " << csv::format(r.connected) << "  " << csv::format(r.raw) << "\n";
  return kOk;
}

inline int cmd_derive(const DeriveOptions &o, std::ostream &out) {
  const auto ds = read_dataset(o.input);
  if (ds.records.empty())
    throw std::runtime_error(o.input + ": empty dataset");
  const fs::path dir = default_out_dir(o.out_dir, o.input);
  ensure_dir(dir);
  const auto name = "derivative_order" + std::to_string(o.order);
  const auto series = mean_energy_derivative(summarize(ds), o.order);
  csv::write_file_atomic(dir / (name + ".csv"),
                         format_derivative(series, o.order == 1 ? "dEdH" : "d2EdH2"));
  if (o.per_sample) {
    std::string body = "sample_index,h,value,stencil\n";
    const auto tracks = paired_sample_derivative(ds, o.order);
    for (std::size_t s = 0; s < tracks.size(); ++s)
      for (const auto &p : tracks[s].points)
        body += std::to_string(s) + ',' + csv::format(p.h) + ',' + csv::format(p.value) + ',' +
                std::string(to_string(p.stencil)) + '\n';
    csv::write_file_atomic(dir / (name + "_per_sample.csv"), body);
  }
  out << "wrote order-" << o.order << " derivative over " << series.points.size()
      << " field values to " << dir.string() << "\n";
  return kOk;
}

inline int cmd_report(const ReportOptions &o, std::ostream &out) {
  struct System {
    std::size_t n_spins;
    SummaryTable summary;
    std::optional<CorrelationTable> correlations;
  };
  std::vector<System> systems;
  for (const auto &in : o.inputs) {
    const fs::path d = in;
    const auto manifest = read_manifest(d / "manifest.txt");
    if (manifest.schema_version != kSchemaVersion)
      throw std::runtime_error((d / "manifest.txt").string() + ": schema version " +
                               std::to_string(manifest.schema_version) + " does not match " +
                               std::to_string(kSchemaVersion));
    const auto ds = read_dataset(d / "dataset.csv");
    if (ds.records.empty())
      throw std::runtime_error((d / "dataset.csv").string() + ": empty dataset");
    System s{ds.n_sites, summarize(ds), std::nullopt};
    if (has_rows(d / "correlations.csv"))
      s.correlations = correlation_table(read_correlations(d / "correlations.csv"));
    systems.push_back(std::move(s));
  }
  std::stable_sort(systems.begin(), systems.end(),
                   [](const System &a, const System &b) { return a.n_spins < b.n_spins; });

  const fs::path dir = o.out_dir;
  ensure_dir(dir);

  std::string by_h = "n_spins,h,energy_variance\n";
  std::string var = "n_spins,mean_energy_variance,min_energy_variance,max_energy_variance\n";
  for (const auto &s : systems) {
    RunningStats v;
    for (const auto &row : s.summary.rows) {
      const double x = row[Quantity::Energy].variance();
      v.push(x);
      by_h += std::to_string(s.n_spins) + ',' + csv::format(row.h) + ',' + csv::format(x) + '\n';
    }
    var += std::to_string(s.n_spins) + ',' + csv::format(v.mean()) + ',' + csv::format(v.min()) +
           ',' + csv::format(v.max()) + '\n';
  }
  csv::write_file_atomic(dir / "energy_variance_by_h.csv", by_h);
  csv::write_file_atomic(dir / "energy_variance_vs_n.csv", var);

  // Distance-by-system table; "-" where a system has no such distance.
  std::size_t max_d = 0;
  for (const auto &s : systems)
    if (s.correlations)
      for (const auto &r : s.correlations->rows)
        max_d = std::max(max_d, r.distance);
  std::string table = "distance";
  for (const auto &s : systems)
    table += ',' + std::to_string(s.n_spins) + "_spins";
  table += '\n';
  for (std::size_t d = 1; d <= max_d; ++d) {
    table += std::to_string(d);
    for (const auto &s : systems) {
      std::string cell = "-";
      if (s.correlations)
        for (const auto &r : s.correlations->rows)
          if (r.distance == d)
            cell = csv::format(r.connected);
      table += ',' + cell;
    }
    table += '\n';
  }
  csv::write_file_atomic(dir / "correlation_report.csv", table);
  out << table;
  return kOk;
}

/// Entry point shared by the executable and the in-process tests.
inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Transverse-field Ising random-state datasets", "tfim"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateOptions gen;
  auto *g = app.add_subcommand("generate", "Sample random states over a field sweep");
  g->add_option("--rows", gen.rows, "Lattice rows")->required()->check(CLI::PositiveNumber);
  g->add_option("--cols", gen.cols, "Lattice columns")->required()->check(CLI::PositiveNumber);
  g->add_option("--j", gen.j, "Coupling J")->capture_default_str();
  g->add_option("--h-min", gen.h_min, "Smallest field value")->capture_default_str();
  g->add_option("--h-max", gen.h_max, "Largest field value")->capture_default_str();
  g->add_option("--h-step", gen.h_step, "Field grid step")->capture_default_str();
  g->add_option("--samples", gen.samples, "Samples per field value")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Master seed")->required();
  g->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  g->add_option("--state-mode", gen.state_mode, "haar | product-random")
      ->capture_default_str()
      ->check(CLI::IsMember({"haar", "product-random"}));
  g->add_option("--bond-mode", gen.bond_mode, "honored | dedup")
      ->capture_default_str()
      ->check(CLI::IsMember({"honored", "dedup"}));
  g->add_option("--metric", gen.metric, "Correlation distance: linear | toroidal")
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "toroidal"}));
  g->add_option("--threads", gen.threads, "Worker threads (0 = all cores)")->capture_default_str();
  g->add_flag("--no-correlators", gen.no_correlators, "Skip pair correlators");

  AnalyzeOptions an;
  auto *a = app.add_subcommand("analyze", "Summaries, histograms and plot data for a dataset");
  a->add_option("--input", an.input, "dataset.csv")->required();
  a->add_option("--bins", an.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  a->add_option("--out-dir", an.out_dir, "Output directory (default: next to input)");
  a->add_option("--correlations", an.correlations,
                "Correlation file (default: correlations.csv next to input)");

  CorrelateOptions co;
  auto *c = app.add_subcommand("correlate", "Distance-resolved correlation table");
  c->add_option("--input", co.input, "correlations.csv")->required();
  c->add_option("--out-dir", co.out_dir, "Output directory (default: next to input)");

  DeriveOptions de;
  auto *d = app.add_subcommand("derive", "Finite-difference derivatives of mean energy");
  d->add_option("--input", de.input, "dataset.csv")->required();
  d->add_option("--order", de.order, "1 or 2")->capture_default_str()->check(CLI::IsMember({1, 2}));
  d->add_flag("--per-sample", de.per_sample, "Also write per-sample-index derivative tracks");
  d->add_option("--out-dir", de.out_dir, "Output directory (default: next to input)");

  ReportOptions re;
  auto *r = app.add_subcommand("report", "Cross-system tables from several run directories");
  r->add_option("inputs", re.inputs, "Run directories")->required()->check(CLI::ExistingDirectory);
  r->add_option("--out-dir", re.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*g)
      return cmd_generate(gen, out);
    if (*a)
      return cmd_analyze(an, out);
    if (*c)
      return cmd_correlate(co, out);
    if (*d)
      return cmd_derive(de, out);
    return cmd_report(re, out);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

} // namespace tfim::cli
