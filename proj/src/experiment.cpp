#include "wsn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace wsn {

std::vector<std::uint64_t> ExperimentGrid::default_seeds() {
  std::vector<std::uint64_t> seeds(30);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

std::uint32_t ExperimentGrid::gateways_for(std::uint32_t n_nodes) const {
  if (pin_gateways) return base_config.n_gateways;
  const auto scaled = static_cast<std::uint32_t>(std::lround(0.04 * n_nodes));
  return std::max<std::uint32_t>(4, scaled);
}

std::vector<SimConfig> ExperimentGrid::expand() const {
  std::vector<SimConfig> cells;
  cells.reserve(protocols.size() * node_counts.size() * seeds.size());
  for (ProtocolKind kind : protocols) {
    for (std::uint32_t n : node_counts) {
      for (std::uint64_t seed : seeds) {
        SimConfig c = base_config;
        c.protocol = kind;
        c.n_nodes = n;
        c.n_gateways = gateways_for(n);
        c.seed = seed;
        c.validate();
        cells.push_back(c);
      }
    }
  }
  return cells;
}

std::string describe(const SimConfig& c) {
  std::ostringstream os;
  os << "protocol=" << to_string(c.protocol) << " n_nodes=" << c.n_nodes
     << " n_gateways=" << c.n_gateways << " seed=" << c.seed;
  return os.str();
}

namespace {

auto sort_key(const SimConfig& c) { return std::make_tuple(c.protocol, c.n_nodes, c.seed, c.n_gateways); }

}  // namespace

std::vector<SimResult> run_configs(std::vector<SimConfig> configs, unsigned parallelism,
                                   std::ostream* progress) {
  std::stable_sort(configs.begin(), configs.end(),
                   [](const SimConfig& a, const SimConfig& b) { return sort_key(a) < sort_key(b); });

  const std::size_t total = configs.size();
  std::vector<SimResult> results(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::size_t failed_index = total;
  std::string failure;

  auto worker = [&] {
    while (!abort.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        results[i] = run(configs[i], RunOptions{.trace_events = false, .check_invariants = true});
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = describe(configs[i]) + ": " + e.what();
        }
        abort = true;
        return;
      }
      const std::size_t finished = ++done;
      if (progress && (finished % 20 == 0 || finished == total)) {
        std::lock_guard lock(mu);
        *progress << "[" << finished << "/" << total << "] runs complete\n" << std::flush;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (abort) throw ExperimentFailure("run failed (" + failure + ")");
  return results;
}

std::vector<SimResult> run_experiment(const ExperimentGrid& grid, unsigned parallelism,
                                      std::ostream* progress) {
  return run_configs(grid.expand(), parallelism, progress);
}

}  // namespace wsn
