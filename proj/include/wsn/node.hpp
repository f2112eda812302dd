#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace wsn {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Advanced marks a high-energy node that still senses and competes for
// cluster head (LEACH and SEP runs). Gateway marks a high-energy node
// acting as a non-sensing cluster manager (GATEWAY runs).
enum class NodeKind : std::uint8_t { Normal, Advanced, Gateway };

enum class Role : std::uint8_t { None, Member, Head, GatewayRelay, DirectToSink };

std::string_view to_string(NodeKind kind);
std::string_view to_string(Role role);

struct Node {
  NodeId id = 0;
  Position position;
  NodeKind kind = NodeKind::Normal;
  double energy = 0.0;
  double initial_energy = 0.0;
  bool alive = false;
  bool in_g = true;
  Role role = Role::None;

  bool is_high_energy() const { return kind != NodeKind::Normal; }
  bool is_sensing() const { return kind != NodeKind::Gateway; }
};

}  // namespace wsn
