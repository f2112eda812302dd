#include "wsn/sim_config.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Leach: return "leach";
    case ProtocolKind::Sep: return "sep";
    case ProtocolKind::Gateway: return "gateway";
  }
  return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "leach") return ProtocolKind::Leach;
  if (lower == "sep") return ProtocolKind::Sep;
  if (lower == "gateway") return ProtocolKind::Gateway;
  return std::nullopt;
}

std::string_view to_string(GatewayPlacement placement) {
  return placement == GatewayPlacement::Grid ? "grid" : "random";
}

std::optional<GatewayPlacement> parse_placement(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "random") return GatewayPlacement::Random;
  if (lower == "grid") return GatewayPlacement::Grid;
  return std::nullopt;
}

namespace {

void check(bool ok, const char* key, const std::string& what) {
  if (!ok) throw InvalidParameters(std::string(key) + ": " + what);
}

}  // namespace

void SimConfig::validate() const {
  check(area.width > 0.0 && std::isfinite(area.width), "area", "width must be positive");
  check(area.height > 0.0 && std::isfinite(area.height), "area", "height must be positive");
  check(n_nodes > 0, "n_nodes", "need at least one sensor");
  check(e0_normal >= 0.0 && std::isfinite(e0_normal), "e0_normal", "must be non-negative");
  check(e0_high >= 0.0 && std::isfinite(e0_high), "e0_high", "must be non-negative");
  check(p_select > 0.0 && p_select < 1.0, "p_select", "must lie in (0, 1)");
  check(packet_bits > 0, "packet_bits", "must be positive");
  check(frames_per_round > 0, "frames_per_round", "must be positive");
  check(max_rounds > 0, "max_rounds", "must be positive");
  check(std::isfinite(sink.x) && std::isfinite(sink.y), "sink", "must be finite");
  if (sep_m) check(*sep_m >= 0.0 && *sep_m <= 1.0, "sep_m", "must lie in [0, 1]");
  check(sep_a >= 0.0 && std::isfinite(sep_a), "sep_a", "must be non-negative");
  check(setup_cost_joules >= 0.0 && std::isfinite(setup_cost_joules), "setup_cost_joules",
        "must be non-negative");
  radio.validate();
  if (protocol == ProtocolKind::Sep) check(effective_sep_m() <= 1.0, "sep_m", "must lie in [0, 1]");
}

double SimConfig::effective_sep_m() const {
  if (sep_m) return *sep_m;
  return static_cast<double>(n_gateways) / static_cast<double>(n_nodes);
}

std::uint32_t SimConfig::sensing_nodes() const {
  return protocol == ProtocolKind::Gateway ? n_nodes : n_nodes + n_gateways;
}

}  // namespace wsn
