#include "wsn/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"
#include "wsn/protocols.hpp"

namespace wsn {

namespace {

// Absolute floor, widened for totals too large for 1e-9 J to be representable.
constexpr double kConservationTolerance = 1e-9;
constexpr double kConservationRelative = 1e-12;

Position grid_slot(std::uint32_t index, std::uint32_t count, const Area& area) {
  const auto cols = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  const std::uint32_t rows = (count + cols - 1) / cols;
  const std::uint32_t r = index / cols;
  const std::uint32_t c = index % cols;
  return {(c + 0.5) * area.width / cols, (r + 0.5) * area.height / rows};
}

}  // namespace

std::vector<Node> init_deployment(const SimConfig& config, Rng& rng) {
  config.validate();
  const NodeKind high_kind =
      config.protocol == ProtocolKind::Gateway ? NodeKind::Gateway : NodeKind::Advanced;

  std::vector<Node> nodes(config.total_nodes());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    n.id = i;
    const bool high = i >= config.n_nodes;
    n.kind = high ? high_kind : NodeKind::Normal;
    if (high && config.gateway_placement == GatewayPlacement::Grid) {
      n.position = grid_slot(i - config.n_nodes, config.n_gateways, config.area);
    } else {
      n.position.x = rng.uniform() * config.area.width;
      n.position.y = rng.uniform() * config.area.height;
    }
    n.initial_energy = high ? config.e0_high : config.e0_normal;
    n.energy = n.initial_energy;
    n.alive = n.energy > 0.0;
    n.in_g = true;
  }
  return nodes;
}

Simulation::Simulation(const SimConfig& config, RunOptions options)
    : config_(config), options_(options), rng_(config.seed) {
  nodes_ = init_deployment(config_, rng_);
  ledger_ = EnergyLedger(nodes_.size(), options_.trace_events);
  CompensatedSum initial;
  for (const Node& n : nodes_) initial.add(n.energy);
  initial_total_ = initial.value();
}

bool Simulation::finished() const {
  if (next_round_ >= config_.max_rounds) return true;
  return !series_.empty() && series_.back().alive_sensing == 0;
}

const RoundMetrics& Simulation::step() {
  if (finished()) throw ContractViolation("step() after the run finished");
  const std::uint32_t round = next_round_;
  ledger_.set_round(round);

  // Setup phase.
  ElectionState election = ElectionState::for_config(config_);
  election.round = round;
  begin_epoch(nodes_, election);
  last_heads_ = elect_cluster_heads(nodes_, election, rng_);
  ClusterTopology topo = assign_members(nodes_, last_heads_);
  if (config_.protocol == ProtocolKind::Gateway) {
    const auto pairs = assign_gateways(nodes_, last_heads_);
    // Both lists are in ascending head order.
    for (std::size_t i = 0; i < pairs.size(); ++i) topo.clusters[i].gateway = pairs[i].second;
  }
  apply_roles(nodes_, topo, config_.protocol);

  if (config_.setup_cost_joules > 0.0) {
    for (Node& n : nodes_) {
      if (!n.alive) continue;
      EnergyEvent ev;
      ev.use = EnergyUse::Setup;
      debit(n, config_.setup_cost_joules, ledger_, ev);
    }
  }

  // Steady-state phase.
  RoundMetrics m;
  m.round = round;
  for (std::uint32_t f = 0; f < config_.frames_per_round; ++f)
    m.packets_to_sink += steady_state_frame(config_.protocol, topo, nodes_, config_, ledger_);

  m.heads_count = static_cast<std::uint32_t>(topo.clusters.size());
  for (const Cluster& c : topo.clusters)
    if (!c.members.empty()) ++m.clusters_count;
  CompensatedSum remaining;
  for (const Node& n : nodes_) {
    remaining.add(n.energy);
    if (!n.alive) {
      if (n.kind == NodeKind::Gateway && !first_gateway_death_) first_gateway_death_ = round;
      continue;
    }
    if (n.is_high_energy())
      ++m.alive_high;
    else
      ++m.alive_normal;
    if (n.is_sensing()) ++m.alive_sensing;
  }
  m.energy_remaining_total = remaining.value();

  if (options_.check_invariants) {
    if (!series_.empty()) {
      const RoundMetrics& prev = series_.back();
      if (m.alive_normal > prev.alive_normal || m.alive_high > prev.alive_high)
        throw ContractViolation("alive count increased in round " + std::to_string(round));
      if (m.energy_remaining_total > prev.energy_remaining_total)
        throw ContractViolation("remaining energy increased in round " + std::to_string(round));
    }
    const double drift = initial_total_ - m.energy_remaining_total - ledger_.total_spent();
    if (std::abs(drift) > kConservationTolerance + kConservationRelative * initial_total_)
      throw ContractViolation("energy ledger out of balance in round " + std::to_string(round));
  }

  series_.push_back(m);
  ++next_round_;
  return series_.back();
}

SimResult Simulation::finish() && {
  SimResult result;
  result.lifetime = lifetime_metrics(series_, config_.sensing_nodes());
  result.termination =
      (!series_.empty() && series_.back().alive_sensing == 0) ? Termination::AllSensingDead
                                                              : Termination::MaxRounds;
  result.rounds_executed = static_cast<std::uint32_t>(series_.size());
  result.series = std::move(series_);
  result.config_echo = config_;
  result.rng_algorithm = std::string(Rng::algorithm);
  result.first_gateway_death = first_gateway_death_;
  result.initial_energy_total = initial_total_;
  CompensatedSum final_total;
  for (const Node& n : nodes_) {
    final_total.add(n.energy);
    result.final_energy_per_node.push_back(n.energy);
  }
  result.final_energy_total = final_total.value();
  result.energy_spent_total = ledger_.total_spent();
  const auto spent = ledger_.per_node_spent();
  result.spent_per_node.assign(spent.begin(), spent.end());
  return result;
}

SimResult run(const SimConfig& config, RunOptions options) {
  Simulation sim(config, options);
  while (!sim.finished()) sim.step();
  return std::move(sim).finish();
}

Lifetime lifetime_metrics(std::span<const RoundMetrics> series, std::uint32_t deployed) {
  if (series.empty()) throw InvalidParameters("lifetime_metrics: empty series");
  Lifetime out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const RoundMetrics& m = series[i];
    if (i > 0 && m.alive_sensing > series[i - 1].alive_sensing)
      throw ContractViolation("lifetime_metrics: alive count increased");
    if (!out.fnd && m.alive_sensing < deployed) out.fnd = m.round;
    if (!out.hnd && 2ull * m.alive_sensing <= deployed) out.hnd = m.round;
    if (!out.lnd && m.alive_sensing == 0) out.lnd = m.round;
  }
  return out;
}

}  // namespace wsn
