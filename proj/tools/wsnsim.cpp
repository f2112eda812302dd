// wsnsim: single runs, experiment grids, and summaries for the cluster
// protocol simulator.
//
// Exit codes: 0 success, 1 usage or config error, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "wsn/config_file.hpp"
#include "wsn/errors.hpp"
#include "wsn/experiment.hpp"
#include "wsn/report.hpp"
#include "wsn/sim_engine.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string opt_str(const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : "-"; }

void print_summary(std::ostream& os, const wsn::ComparisonSummary& summary) {
  os << std::left << std::setw(9) << "protocol" << std::right << std::setw(8) << "n_nodes"
     << std::setw(6) << "runs";
  for (const char* m : {"fnd", "hnd", "lnd"})
    os << std::setw(11) << (std::string("mean_") + m) << std::setw(9) << (std::string("sd_") + m);
  os << '\n';
  for (const auto& [key, cell] : summary.per_cell) {
    os << std::left << std::setw(9) << wsn::to_string(key.first) << std::right << std::setw(8)
       << key.second << std::setw(6) << cell.runs;
    std::string undefined;
    const std::pair<const char*, const wsn::MetricStats*> metrics[] = {
        {"fnd", &cell.fnd}, {"hnd", &cell.hnd}, {"lnd", &cell.lnd}};
    for (const auto& [name, s] : metrics) {
      if (s->has_stats()) {
        os << std::setw(11) << std::fixed << std::setprecision(1) << s->mean << std::setw(9)
           << std::setprecision(1) << s->stddev;
      } else {
        os << std::setw(11) << "-" << std::setw(9) << "-";
      }
      if (s->undefined > 0)
        undefined += std::string(undefined.empty() ? "" : ", ") + name + " undefined in " +
                     std::to_string(s->undefined);
    }
    if (!undefined.empty()) os << "   (" << undefined << ")";
    os << '\n';
  }
  os.unsetf(std::ios::fixed);
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint32_t> gateways;
  std::optional<std::uint32_t> rounds;
};

wsn::ConfigFile load(const CommonFlags& flags) {
  if (flags.config_path.empty()) return {};
  return wsn::parse_config_file(flags.config_path);
}

template <typename F>
auto as_usage(const char* flag, F&& parse) {
  try {
    return parse();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

int run_simulate(const CommonFlags& flags, const std::optional<std::string>& protocol,
                 const std::optional<std::uint32_t>& nodes, const std::optional<std::uint64_t>& seed) {
  wsn::ConfigFile file = load(flags);
  if (file.has_grid_keys())
    throw UsageError("config: experiment keys (node_counts, protocols, seeds, pin_gateways) are not valid for simulate");
  wsn::SimConfig cfg = file.base;
  if (protocol) {
    const auto kind = wsn::parse_protocol(*protocol);
    if (!kind) throw UsageError("--protocol: expected leach, sep or gateway");
    cfg.protocol = *kind;
  }
  if (nodes) cfg.n_nodes = *nodes;
  if (flags.gateways) cfg.n_gateways = *flags.gateways;
  if (seed) cfg.seed = *seed;
  if (flags.rounds) cfg.max_rounds = *flags.rounds;
  try {
    cfg.validate();
  } catch (const wsn::InvalidParameters& e) {
    throw UsageError(e.what());
  }

  const wsn::SimResult result = wsn::run(cfg);
  std::cout << "protocol=" << wsn::to_string(cfg.protocol) << " n_nodes=" << cfg.n_nodes
            << " n_gateways=" << cfg.n_gateways << " seed=" << cfg.seed << " rng=" << result.rng_algorithm
            << '\n'
            << "fnd=" << opt_str(result.lifetime.fnd) << " hnd=" << opt_str(result.lifetime.hnd)
            << " lnd=" << opt_str(result.lifetime.lnd) << " rounds_executed=" << result.rounds_executed
            << " stopped_by="
            << (result.termination == wsn::Termination::AllSensingDead ? "all-sensing-dead" : "max-rounds")
            << '\n'
            << "energy_spent_j=" << wsn::format_double(result.energy_spent_total)
            << " first_gateway_death=" << opt_str(result.first_gateway_death) << '\n';

  if (!flags.out_dir.empty()) {
    const std::span<const wsn::SimResult> one(&result, 1);
    wsn::emit_csv(one, flags.out_dir);
    wsn::emit_plot_data(one, flags.out_dir);
    std::cout << "wrote " << flags.out_dir << "/{runs.csv,series.csv,*.dat}\n";
  }
  return 0;
}

int run_grid(const CommonFlags& flags, const std::optional<std::string>& protocols,
             const std::optional<std::string>& nodes, const std::optional<std::string>& seeds,
             bool pin, unsigned parallelism) {
  wsn::ConfigFile file = load(flags);
  wsn::ExperimentGrid grid;
  grid.base_config = file.base;
  if (file.node_counts) grid.node_counts = *file.node_counts;
  if (file.protocols) grid.protocols = *file.protocols;
  if (file.seeds) grid.seeds = *file.seeds;
  if (file.pin_gateways) grid.pin_gateways = *file.pin_gateways;

  if (protocols) grid.protocols = as_usage("--protocol", [&] { return wsn::parse_protocol_list(*protocols); });
  if (nodes) grid.node_counts = as_usage("--nodes", [&] { return wsn::parse_count_list(*nodes); });
  if (seeds) grid.seeds = as_usage("--seeds", [&] { return wsn::parse_seed_list(*seeds); });
  if (flags.gateways) {
    grid.base_config.n_gateways = *flags.gateways;
    grid.pin_gateways = true;
  }
  if (pin) grid.pin_gateways = true;
  if (flags.rounds) grid.base_config.max_rounds = *flags.rounds;
  if (grid.node_counts.empty() || grid.protocols.empty() || grid.seeds.empty())
    throw UsageError("experiment grid is empty");
  try {
    (void)grid.expand();
  } catch (const wsn::InvalidParameters& e) {
    throw UsageError(e.what());
  }

  const auto results = wsn::run_experiment(grid, parallelism, &std::cerr);
  const std::string out_dir = flags.out_dir.empty() ? "results" : flags.out_dir;
  wsn::emit_csv(results, out_dir);
  wsn::emit_plot_data(results, out_dir);
  const auto summary = wsn::summarize(wsn::to_records(results));
  wsn::write_text_file(std::filesystem::path(out_dir) / "summary.csv", wsn::summary_csv(summary));
  print_summary(std::cout, summary);
  std::cout << "wrote " << results.size() << " runs to " << out_dir << "/\n";
  return 0;
}

int run_summarize(const std::string& runs_path, const std::string& out_dir) {
  const auto records = wsn::read_runs_csv(runs_path);
  const auto summary = wsn::summarize(records);
  print_summary(std::cout, summary);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    wsn::write_text_file(std::filesystem::path(out_dir) / "summary.csv", wsn::summary_csv(summary));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-based simulator for clustered wireless sensor networks (LEACH, SEP, GATEWAY)"};
  app.require_subcommand(1);
  app.footer(wsn::config_reference());

  CommonFlags sim_flags;
  std::optional<std::string> sim_protocol;
  std::optional<std::uint32_t> sim_nodes;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  simulate->add_option("--config", sim_flags.config_path, "Config file (key = value)");
  simulate->add_option("--protocol", sim_protocol, "leach | sep | gateway (default leach)");
  simulate->add_option("--nodes", sim_nodes, "Normal sensor count (default 100)");
  simulate->add_option("--gateways", sim_flags.gateways, "High-energy node count (default 4)");
  simulate->add_option("--seed", sim_seed, "Random stream seed (default 0)");
  simulate->add_option("--rounds", sim_flags.rounds, "Round cap (default 1000)");
  simulate->add_option("--out-dir", sim_flags.out_dir, "Write runs.csv, series.csv and plot data here");

  CommonFlags exp_flags;
  std::optional<std::string> exp_protocols, exp_nodes, exp_seeds;
  bool pin = false;
  unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
  auto* experiment = app.add_subcommand("experiment", "Run the protocol x node-count x seed grid");
  experiment->add_option("--config", exp_flags.config_path, "Config file (key = value)");
  experiment->add_option("--protocol", exp_protocols, "Comma list or 'all' (default all)");
  experiment->add_option("--nodes", exp_nodes, "Node counts (default 50,100,200,300,400,500)");
  experiment->add_option("--gateways", exp_flags.gateways,
                         "Use exactly this many high-energy nodes per cell (implies --pin-gateways)");
  experiment->add_option("--seeds", exp_seeds, "Seeds, 'a..b' or comma list (default 0..29)");
  experiment->add_option("--rounds", exp_flags.rounds, "Round cap (default 1000)");
  experiment->add_option("--out-dir", exp_flags.out_dir, "Output directory (default results)");
  experiment->add_option("--parallelism", parallelism, "Worker threads")->capture_default_str();
  experiment->add_flag("--pin-gateways", pin,
                       "Keep n_gateways (default 4) for every node count instead of max(4, round(0.04 n))");

  std::string runs_path, sum_out;
  auto* summarize = app.add_subcommand("summarize", "Recompute lifetime statistics from runs.csv");
  summarize->add_option("runs_csv", runs_path, "Path to runs.csv")->required();
  summarize->add_option("--out-dir", sum_out, "Also write summary.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim_flags, sim_protocol, sim_nodes, sim_seed);
    if (*experiment) return run_grid(exp_flags, exp_protocols, exp_nodes, exp_seeds, pin, parallelism);
    return run_summarize(runs_path, sum_out);
  } catch (const wsn::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
