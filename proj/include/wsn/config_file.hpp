#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/sim_config.hpp"

namespace wsn {

/// Parsed contents of a config file: a base SimConfig plus the optional
/// experiment-grid keys. Fields the file does not mention keep their
/// defaults.
struct ConfigFile {
  SimConfig base;
  std::optional<std::vector<std::uint32_t>> node_counts;
  std::optional<std::vector<ProtocolKind>> protocols;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<bool> pin_gateways;

  bool has_grid_keys() const { return node_counts || protocols || seeds || pin_gateways; }
};

/// Flat `key = value` text, one pair per line, `#` starts a comment.
/// Keys are SimConfig field names; pairs are written `a,b`. Unknown or
/// repeated keys and out-of-range values raise ParseError naming the key
/// and line.
ConfigFile parse_config_text(std::string_view text);
ConfigFile parse_config_file(const std::filesystem::path& path);

/// Documented key list with defaults, for --help.
std::string config_reference();

// Value syntaxes shared with the command line.
std::vector<std::uint32_t> parse_count_list(std::string_view text);      // "50,100,200"
std::vector<std::uint64_t> parse_seed_list(std::string_view text);       // "0..29" or "1,4,9"
std::vector<ProtocolKind> parse_protocol_list(std::string_view text);    // "leach,sep"

}  // namespace wsn
