#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wsn/energy_model.hpp"
#include "wsn/node.hpp"
#include "wsn/random.hpp"
#include "wsn/sim_config.hpp"

namespace wsn {

/// Cluster-head threshold for a node in round `round`:
///   T = P / (1 - P * (round mod L)),  L = round(1/P)
/// and 0 for a node that already served in the current epoch.
double leach_threshold(bool in_g, std::uint32_t round, double p);

/// Rounds per election epoch for selection probability p.
std::uint32_t epoch_length(double p);

struct SepProbabilities {
  double normal = 0.0;
  double advanced = 0.0;
};

/// Weighted election probabilities for a two-level energy population with
/// a fraction m of advanced nodes carrying (1 + a) times the base energy.
/// The population mean stays P.
SepProbabilities sep_probabilities(double p, double m, double a);

struct ElectionState {
  std::uint32_t round = 0;
  double p_normal = 0.1;
  double p_advanced = 0.1;

  static ElectionState for_config(const SimConfig& config);
  double probability_for(const Node& node) const;
};

/// Restores eligibility for every alive sensing node whose class starts a
/// new epoch this round.
void begin_epoch(std::span<Node> nodes, const ElectionState& state);

/// Draws one uniform per eligible candidate in ascending id order and elects
/// it when the draw falls below its threshold. Elected nodes leave G.
/// Gateway-kind nodes are never candidates.
std::vector<NodeId> elect_cluster_heads(std::span<Node> nodes, const ElectionState& state,
                                        Rng& rng);

struct Cluster {
  NodeId head = 0;
  std::vector<NodeId> members;  // ascending id, i.e. TDMA slot order
  std::optional<NodeId> gateway;
};

struct ClusterTopology {
  std::vector<Cluster> clusters;          // ascending head id
  std::vector<NodeId> direct_to_sink;     // set only when there are no heads
  std::vector<std::optional<NodeId>> membership;  // node id -> head id

  std::vector<NodeId> heads() const;
  std::optional<NodeId> gateway_of(NodeId head) const;
};

/// Every alive sensing non-head joins the nearest head, lowest head id on
/// ties. With no heads, all of them go direct to the sink.
ClusterTopology assign_members(std::span<const Node> nodes, std::span<const NodeId> heads);

/// Nearest alive gateway per head (lowest gateway id on ties), as
/// (head, gateway) pairs in head order. Empty when no gateway is alive.
std::vector<std::pair<NodeId, NodeId>> assign_gateways(std::span<const Node> nodes,
                                                       std::span<const NodeId> heads);

/// Stamps each node's role for the round and checks role exclusivity.
void apply_roles(std::span<Node> nodes, const ClusterTopology& topo, ProtocolKind kind);

/// One TDMA frame of data transfer. Returns the number of fused packets
/// that reached the sink.
///
/// Event order: clusters in head order; inside a cluster, members send in
/// slot order, then the head either fuses and sends one packet to the sink
/// (LEACH, SEP, or GATEWAY with its gateway gone) or forwards every packet
/// raw to its gateway, which fuses and sends one packet to the sink. Then
/// direct-to-sink nodes fuse their own sample and send, ascending id.
///
/// A send completes only if the sender could pay for all of it. Receivers
/// pay per packet and drop it if they die doing so. Dead nodes do nothing.
std::uint32_t steady_state_frame(ProtocolKind kind, const ClusterTopology& topo,
                                 std::span<Node> nodes, const SimConfig& config,
                                 EnergyLedger& ledger);

}  // namespace wsn
