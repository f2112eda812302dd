#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wsn/node.hpp"

namespace wsn {

/// First-order radio model coefficients, all in joules. The crossover
/// distance is not stored; it always follows from eps_fs and eps_mp.
struct RadioParams {
  double e_elec = 50e-9;      // J/bit, tx and rx electronics
  double eps_fs = 10e-12;     // J/bit/m^2, free-space amplifier
  double eps_mp = 0.0013e-12; // J/bit/m^4, multipath amplifier
  double e_da = 5e-9;         // J/bit/signal, data aggregation

  void validate() const;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

double crossover_distance(const RadioParams& params);

/// Electronics plus amplifier cost of sending `bits` over `distance`
/// meters. Free-space (d^2) up to and including d0, multipath (d^4) past it.
double transmit_energy(double bits, double distance, const RadioParams& params);
double receive_energy(double bits, const RadioParams& params);
double aggregate_energy(double bits_per_signal, double n_signals, const RadioParams& params);

enum class EnergyUse : std::uint8_t {
  MemberTx,     // member -> head
  HeadRx,
  HeadTx,       // head -> gateway (raw) or head -> sink (fused)
  GatewayRx,
  GatewayTx,    // gateway -> sink
  Aggregation,
  DirectTx,     // node -> sink with no head
  Setup,
};

struct EnergyEvent {
  std::uint32_t round = 0;
  NodeId node = 0;
  EnergyUse use = EnergyUse::Setup;
  double bits = 0.0;
  double distance = 0.0;  // transmissions only
  double signals = 0.0;   // aggregation only
  double requested = 0.0;
  double removed = 0.0;
};

/// Neumaier compensated sum. Run totals add up ~10^6 small debits against
/// a running value in the hundreds of joules.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Cumulative spend per node. Optionally keeps the full event trace for
/// audits; tracing is off for benchmark runs.
class EnergyLedger {
 public:
  explicit EnergyLedger(std::size_t n_nodes = 0, bool trace = false)
      : per_node_(n_nodes, 0.0), trace_enabled_(trace) {}

  void record(const EnergyEvent& event);

  double spent(NodeId node) const { return per_node_.at(node); }
  std::span<const double> per_node_spent() const { return per_node_; }
  double total_spent() const { return total_.value(); }
  std::span<const EnergyEvent> events() const { return events_; }
  bool tracing() const { return trace_enabled_; }

  void set_round(std::uint32_t round) { round_ = round; }
  std::uint32_t round() const { return round_; }

 private:
  std::vector<double> per_node_;
  CompensatedSum total_;
  bool trace_enabled_ = false;
  std::uint32_t round_ = 0;
  std::vector<EnergyEvent> events_;
};

/// Removes `amount` joules from a live node, clamping at zero. A node left
/// with no energy is marked dead immediately. Returns true when the node
/// could pay the full amount, i.e. the operation it was paying for completed.
bool debit(Node& node, double amount, EnergyLedger& ledger, EnergyEvent event = {});

}  // namespace wsn
