#include "wsn/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Normal: return "normal";
    case NodeKind::Advanced: return "advanced";
    case NodeKind::Gateway: return "gateway";
  }
  return "?";
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::None: return "none";
    case Role::Member: return "member";
    case Role::Head: return "head";
    case Role::GatewayRelay: return "gateway-relay";
    case Role::DirectToSink: return "direct-to-sink";
  }
  return "?";
}

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameters("selection probability must lie in (0, 1)");
}

double squared_distance(Position a, Position b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::uint32_t epoch_length(double p) {
  require_probability(p);
  return static_cast<std::uint32_t>(std::lround(1.0 / p));
}

double leach_threshold(bool in_g, std::uint32_t round, double p) {
  const std::uint32_t len = epoch_length(p);
  if (!in_g) return 0.0;
  const double t = p / (1.0 - p * static_cast<double>(round % len));
  return std::clamp(t, 0.0, 1.0);
}

SepProbabilities sep_probabilities(double p, double m, double a) {
  require_probability(p);
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidParameters("sep_m must lie in [0, 1]");
  if (!(a >= 0.0)) throw InvalidParameters("sep_a must be non-negative");
  const double base = p / (1.0 + a * m);
  return {base, base * (1.0 + a)};
}

ElectionState ElectionState::for_config(const SimConfig& config) {
  ElectionState state;
  state.p_normal = config.p_select;
  state.p_advanced = config.p_select;
  if (config.protocol == ProtocolKind::Sep) {
    const auto sep = sep_probabilities(config.p_select, config.effective_sep_m(), config.sep_a);
    state.p_normal = sep.normal;
    state.p_advanced = sep.advanced;
  }
  return state;
}

double ElectionState::probability_for(const Node& node) const {
  return node.kind == NodeKind::Advanced ? p_advanced : p_normal;
}

void begin_epoch(std::span<Node> nodes, const ElectionState& state) {
  const std::uint32_t len_normal = epoch_length(state.p_normal);
  const std::uint32_t len_advanced = epoch_length(state.p_advanced);
  for (Node& node : nodes) {
    if (!node.alive || !node.is_sensing()) continue;
    const std::uint32_t len = node.kind == NodeKind::Advanced ? len_advanced : len_normal;
    if (state.round % len == 0) node.in_g = true;
  }
}

std::vector<NodeId> elect_cluster_heads(std::span<Node> nodes, const ElectionState& state,
                                        Rng& rng) {
  std::vector<NodeId> heads;
  for (Node& node : nodes) {
    if (!node.alive || !node.in_g || !node.is_sensing()) continue;
    const double t = leach_threshold(true, state.round, state.probability_for(node));
    if (rng.uniform() < t) {
      heads.push_back(node.id);
      node.in_g = false;
    }
  }
  return heads;
}

std::vector<NodeId> ClusterTopology::heads() const {
  std::vector<NodeId> out;
  out.reserve(clusters.size());
  for (const Cluster& c : clusters) out.push_back(c.head);
  return out;
}

std::optional<NodeId> ClusterTopology::gateway_of(NodeId head) const {
  for (const Cluster& c : clusters)
    if (c.head == head) return c.gateway;
  return std::nullopt;
}

ClusterTopology assign_members(std::span<const Node> nodes, std::span<const NodeId> heads) {
  ClusterTopology topo;
  topo.membership.assign(nodes.size(), std::nullopt);

  std::vector<NodeId> sorted(heads.begin(), heads.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<char> is_head(nodes.size(), 0);
  std::vector<Position> head_pos;
  head_pos.reserve(sorted.size());
  for (NodeId h : sorted) {
    if (h >= nodes.size() || !nodes[h].alive) throw ContractViolation("head is not an alive node");
    is_head[h] = 1;
    topo.clusters.push_back(Cluster{h, {}, std::nullopt});
    head_pos.push_back(nodes[h].position);
  }

  for (const Node& node : nodes) {
    if (!node.alive || !node.is_sensing() || is_head[node.id]) continue;
    if (sorted.empty()) {
      topo.direct_to_sink.push_back(node.id);
      continue;
    }
    std::size_t best = 0;
    double best_d2 = squared_distance(node.position, head_pos[0]);
    for (std::size_t h = 1; h < head_pos.size(); ++h) {
      const double d2 = squared_distance(node.position, head_pos[h]);
      if (d2 < best_d2) {
        best = h;
        best_d2 = d2;
      }
    }
    topo.clusters[best].members.push_back(node.id);
    topo.membership[node.id] = sorted[best];
  }
  return topo;
}

std::vector<std::pair<NodeId, NodeId>> assign_gateways(std::span<const Node> nodes,
                                                       std::span<const NodeId> heads) {
  std::vector<NodeId> gateways;
  for (const Node& node : nodes)
    if (node.alive && node.kind == NodeKind::Gateway) gateways.push_back(node.id);

  std::vector<std::pair<NodeId, NodeId>> out;
  if (gateways.empty()) return out;
  for (NodeId h : heads) {
    if (h >= nodes.size()) throw ContractViolation("unknown head id");
    NodeId best = gateways.front();
    double best_d2 = squared_distance(nodes[h].position, nodes[best].position);
    for (NodeId g : gateways) {
      const double d2 = squared_distance(nodes[h].position, nodes[g].position);
      if (d2 < best_d2) {
        best = g;
        best_d2 = d2;
      }
    }
    out.emplace_back(h, best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void apply_roles(std::span<Node> nodes, const ClusterTopology& topo, ProtocolKind kind) {
  for (Node& node : nodes) node.role = Role::None;
  auto assign = [&](NodeId id, Role role) {
    if (id >= nodes.size()) throw ContractViolation("topology references unknown node");
    Node& node = nodes[id];
    if (!node.alive) throw ContractViolation("topology references dead node " + std::to_string(id));
    if (node.role != Role::None)
      throw ContractViolation("node " + std::to_string(id) + " holds two roles");
    node.role = role;
  };
  for (const Cluster& c : topo.clusters) {
    assign(c.head, Role::Head);
    for (NodeId m : c.members) assign(m, Role::Member);
  }
  for (NodeId d : topo.direct_to_sink) assign(d, Role::DirectToSink);
  for (Node& node : nodes) {
    if (!node.alive) continue;
    if (node.kind == NodeKind::Gateway) {
      if (kind != ProtocolKind::Gateway) throw ContractViolation("gateway node outside GATEWAY run");
      if (node.role != Role::None) throw ContractViolation("gateway node given a sensing role");
      node.role = Role::GatewayRelay;
    } else if (node.role == Role::None) {
      throw ContractViolation("alive sensing node " + std::to_string(node.id) + " has no role");
    }
  }
  for (const Cluster& c : topo.clusters) {
    if (!c.gateway) continue;
    if (*c.gateway >= nodes.size() || nodes[*c.gateway].kind != NodeKind::Gateway)
      throw ContractViolation("cluster mapped to a non-gateway node");
  }
}

namespace {

class FrameRunner {
 public:
  FrameRunner(std::span<Node> nodes, const SimConfig& config, EnergyLedger& ledger)
      : nodes_(nodes), radio_(config.radio), bits_(config.packet_bits), ledger_(ledger) {}

  bool send(NodeId from, Position to, EnergyUse use) {
    Node& n = nodes_[from];
    const double d = distance(n.position, to);
    EnergyEvent ev;
    ev.use = use;
    ev.bits = bits_;
    ev.distance = d;
    return debit(n, transmit_energy(bits_, d, radio_), ledger_, ev);
  }

  bool receive(NodeId at, EnergyUse use) {
    EnergyEvent ev;
    ev.use = use;
    ev.bits = bits_;
    return debit(nodes_[at], receive_energy(bits_, radio_), ledger_, ev);
  }

  bool fuse(NodeId at, std::uint32_t signals) {
    EnergyEvent ev;
    ev.use = EnergyUse::Aggregation;
    ev.bits = bits_;
    ev.signals = signals;
    return debit(nodes_[at], aggregate_energy(bits_, signals, radio_), ledger_, ev);
  }

  // Fuse `signals` at `at`, then ship one packet to the sink.
  bool fuse_and_deliver(NodeId at, std::uint32_t signals, Position sink, EnergyUse tx_use) {
    if (!alive(at)) return false;
    if (!fuse(at, signals) || !alive(at)) return false;
    return send(at, sink, tx_use);
  }

  bool alive(NodeId id) const { return nodes_[id].alive; }
  Position position(NodeId id) const { return nodes_[id].position; }

 private:
  std::span<Node> nodes_;
  const RadioParams& radio_;
  double bits_;
  EnergyLedger& ledger_;
};

}  // namespace

std::uint32_t steady_state_frame(ProtocolKind kind, const ClusterTopology& topo,
                                 std::span<Node> nodes, const SimConfig& config,
                                 EnergyLedger& ledger) {
  FrameRunner io(nodes, config, ledger);
  const Position sink = config.sink;
  std::uint32_t delivered = 0;

  for (const Cluster& c : topo.clusters) {
    if (c.head >= nodes.size()) throw ContractViolation("unknown head id");
    if (nodes[c.head].role != Role::Head) throw ContractViolation("cluster head without head role");
    if (c.gateway && kind != ProtocolKind::Gateway)
      throw ContractViolation("gateway assignment outside GATEWAY run");

    const Position head_pos = io.position(c.head);
    std::uint32_t received = 0;
    for (NodeId m : c.members) {
      if (nodes[m].role != Role::Member) throw ContractViolation("member without member role");
      if (!io.alive(m)) continue;
      if (!io.send(m, head_pos, EnergyUse::MemberTx)) continue;
      if (!io.alive(c.head)) continue;
      if (io.receive(c.head, EnergyUse::HeadRx)) ++received;
    }
    if (!io.alive(c.head)) continue;

    const std::uint32_t signals = received + 1;
    if (c.gateway && io.alive(*c.gateway)) {
      const NodeId gw = *c.gateway;
      const Position gw_pos = io.position(gw);
      std::uint32_t at_gateway = 0;
      for (std::uint32_t k = 0; k < signals; ++k) {
        if (!io.alive(c.head)) break;
        if (!io.send(c.head, gw_pos, EnergyUse::HeadTx)) break;
        if (!io.alive(gw)) continue;
        if (io.receive(gw, EnergyUse::GatewayRx)) ++at_gateway;
      }
      if (at_gateway > 0 && io.fuse_and_deliver(gw, at_gateway, sink, EnergyUse::GatewayTx))
        ++delivered;
    } else if (io.fuse_and_deliver(c.head, signals, sink, EnergyUse::HeadTx)) {
      ++delivered;
    }
  }

  for (NodeId d : topo.direct_to_sink) {
    if (nodes[d].role != Role::DirectToSink) throw ContractViolation("direct node without role");
    if (io.fuse_and_deliver(d, 1, sink, EnergyUse::DirectTx)) ++delivered;
  }
  return delivered;
}

}  // namespace wsn
