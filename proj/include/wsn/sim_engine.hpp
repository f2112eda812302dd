#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsn/energy_model.hpp"
#include "wsn/node.hpp"
#include "wsn/random.hpp"
#include "wsn/sim_config.hpp"

namespace wsn {

/// State at the end of one round.
struct RoundMetrics {
  std::uint32_t round = 0;
  std::uint32_t alive_normal = 0;   // normal-energy sensors
  std::uint32_t alive_high = 0;     // advanced sensors or gateways
  std::uint32_t alive_sensing = 0;  // what lifetime metrics count
  std::uint32_t heads_count = 0;
  std::uint32_t clusters_count = 0;  // heads with at least one member
  double energy_remaining_total = 0.0;
  std::uint32_t packets_to_sink = 0;
};

struct Lifetime {
  std::optional<std::uint32_t> fnd;
  std::optional<std::uint32_t> hnd;
  std::optional<std::uint32_t> lnd;

  friend bool operator==(const Lifetime&, const Lifetime&) = default;
};

enum class Termination : std::uint8_t { MaxRounds, AllSensingDead };

struct SimResult {
  Lifetime lifetime;
  std::vector<RoundMetrics> series;
  SimConfig config_echo;
  std::string rng_algorithm;
  Termination termination = Termination::MaxRounds;
  std::uint32_t rounds_executed = 0;
  std::optional<std::uint32_t> first_gateway_death;
  double initial_energy_total = 0.0;
  double final_energy_total = 0.0;
  double energy_spent_total = 0.0;  // ledger total
  std::vector<double> spent_per_node;
  std::vector<double> final_energy_per_node;
};

struct RunOptions {
  bool trace_events = false;
  bool check_invariants = true;
};

/// Normal sensors get ids 0..n_nodes-1, high-energy nodes follow. Random
/// placement draws x then y per node in id order.
std::vector<Node> init_deployment(const SimConfig& config, Rng& rng);

/// Round-by-round driver with access to the live state, for tests and
/// tools that need more than the summary.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config, RunOptions options = {});

  /// Executes one round and returns its metrics.
  const RoundMetrics& step();
  bool finished() const;

  std::span<const Node> nodes() const { return nodes_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const std::vector<RoundMetrics>& series() const { return series_; }
  const std::vector<NodeId>& last_heads() const { return last_heads_; }
  const SimConfig& config() const { return config_; }

  SimResult finish() &&;

 private:
  SimConfig config_;
  RunOptions options_;
  Rng rng_;
  std::vector<Node> nodes_;
  EnergyLedger ledger_;
  std::vector<RoundMetrics> series_;
  std::vector<NodeId> last_heads_;
  std::uint32_t next_round_ = 0;
  std::optional<std::uint32_t> first_gateway_death_;
  double initial_total_ = 0.0;
};

SimResult run(const SimConfig& config, RunOptions options = {});

/// FND: first round with fewer than `deployed` sensing nodes alive.
/// HND: first round with at most half alive. LND: first round with none.
Lifetime lifetime_metrics(std::span<const RoundMetrics> series, std::uint32_t deployed);

}  // namespace wsn
