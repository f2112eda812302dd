#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wsn/energy_model.hpp"
#include "wsn/node.hpp"

namespace wsn {

enum class ProtocolKind : std::uint8_t { Leach, Sep, Gateway };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view text);

enum class GatewayPlacement : std::uint8_t { Random, Grid };

std::string_view to_string(GatewayPlacement placement);
std::optional<GatewayPlacement> parse_placement(std::string_view text);

struct Area {
  double width = 100.0;
  double height = 100.0;

  friend bool operator==(const Area&, const Area&) = default;
};

/// Everything a single run depends on. A run is a pure function of this.
struct SimConfig {
  Area area;
  std::uint32_t n_nodes = 100;   // normal sensors
  std::uint32_t n_gateways = 4;  // high-energy nodes
  double e0_normal = 0.5;
  double e0_high = 1.0;
  double p_select = 0.1;
  std::uint32_t packet_bits = 4000;
  std::uint32_t frames_per_round = 1;
  std::uint32_t max_rounds = 1000;
  Position sink{50.0, 100.0};
  ProtocolKind protocol = ProtocolKind::Leach;
  std::optional<double> sep_m;  // unset: n_gateways / n_nodes
  double sep_a = 1.0;
  std::uint64_t seed = 0;
  GatewayPlacement gateway_placement = GatewayPlacement::Random;
  double setup_cost_joules = 0.0;
  RadioParams radio;

  void validate() const;
  double effective_sep_m() const;
  std::uint32_t total_nodes() const { return n_nodes + n_gateways; }
  /// Nodes that sense and count toward lifetime metrics.
  std::uint32_t sensing_nodes() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

}  // namespace wsn
