#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsn/sim_config.hpp"
#include "wsn/sim_engine.hpp"

namespace wsn {

/// One line of runs.csv.
struct RunRecord {
  ProtocolKind protocol = ProtocolKind::Leach;
  std::uint32_t n_nodes = 0;
  std::uint32_t n_gateways = 0;
  std::uint64_t seed = 0;
  Lifetime lifetime;
  std::uint32_t rounds_executed = 0;
  double total_energy_spent_j = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord to_record(const SimResult& result);
std::vector<RunRecord> to_records(std::span<const SimResult> results);

struct MetricStats {
  std::uint32_t defined = 0;
  std::uint32_t undefined = 0;
  // Present only when at least one run defined the metric.
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 for a single run

  bool has_stats() const { return defined > 0; }
  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

struct CellSummary {
  std::uint32_t runs = 0;
  MetricStats fnd;
  MetricStats hnd;
  MetricStats lnd;

  friend bool operator==(const CellSummary&, const CellSummary&) = default;
};

using CellKey = std::pair<ProtocolKind, std::uint32_t>;  // (protocol, n_nodes)

struct ComparisonSummary {
  std::map<CellKey, CellSummary> per_cell;

  friend bool operator==(const ComparisonSummary&, const ComparisonSummary&) = default;
};

MetricStats metric_stats(std::span<const std::optional<std::uint32_t>> values);
ComparisonSummary summarize(std::span<const RunRecord> records);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

std::string runs_csv(std::span<const RunRecord> records);
std::string series_csv(std::span<const SimResult> results);
std::string summary_csv(const ComparisonSummary& summary);

/// Writes runs.csv and series.csv into `dir`.
void emit_csv(std::span<const SimResult> results, const std::filesystem::path& dir);

/// Writes alive_<protocol>.dat (one block per node count of `round mean_alive`,
/// averaged over seeds) and fnd_vs_n.dat into `dir`.
void emit_plot_data(std::span<const SimResult> results, const std::filesystem::path& dir);

std::vector<RunRecord> parse_runs_csv(std::string_view text);
std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace wsn
