#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsn/sim_config.hpp"
#include "wsn/sim_engine.hpp"

namespace wsn {

struct ExperimentGrid {
  std::vector<std::uint32_t> node_counts{50, 100, 200, 300, 400, 500};
  std::vector<ProtocolKind> protocols{ProtocolKind::Leach, ProtocolKind::Sep, ProtocolKind::Gateway};
  std::vector<std::uint64_t> seeds = default_seeds();
  SimConfig base_config;
  // false: gateways scale as max(4, round(0.04 n)); true: base_config.n_gateways everywhere
  bool pin_gateways = false;

  static std::vector<std::uint64_t> default_seeds();

  std::uint32_t gateways_for(std::uint32_t n_nodes) const;
  /// protocol x node_count x seed, every cell fully resolved and validated.
  std::vector<SimConfig> expand() const;
};

class ExperimentFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every config on up to `parallelism` worker threads. Output order is
/// canonical (protocol, n_nodes, seed) whatever the completion order. The
/// first failing cell aborts the batch with an ExperimentFailure naming it.
std::vector<SimResult> run_configs(std::vector<SimConfig> configs, unsigned parallelism,
                                   std::ostream* progress = nullptr);

std::vector<SimResult> run_experiment(const ExperimentGrid& grid, unsigned parallelism,
                                      std::ostream* progress = nullptr);

std::string describe(const SimConfig& config);

}  // namespace wsn
