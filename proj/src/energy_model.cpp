#include "wsn/energy_model.hpp"

#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0)) throw InvalidParameters(std::string(name) + " must be non-negative");
}

}  // namespace

void RadioParams::validate() const {
  if (!(e_elec > 0.0) || !(eps_fs > 0.0) || !(eps_mp > 0.0) || !(e_da > 0.0))
    throw InvalidParameters("radio coefficients must be strictly positive");
}

double crossover_distance(const RadioParams& params) {
  if (!(params.eps_fs > 0.0) || !(params.eps_mp > 0.0))
    throw InvalidParameters("amplifier coefficients must be strictly positive");
  return std::sqrt(params.eps_fs / params.eps_mp);
}

double transmit_energy(double bits, double distance, const RadioParams& params) {
  require_non_negative(bits, "bits");
  require_non_negative(distance, "distance");
  const double d0 = crossover_distance(params);
  if (distance <= d0) return params.e_elec * bits + params.eps_fs * bits * distance * distance;
  return params.e_elec * bits + params.eps_mp * bits * distance * distance * distance * distance;
}

double receive_energy(double bits, const RadioParams& params) {
  require_non_negative(bits, "bits");
  return params.e_elec * bits;
}

double aggregate_energy(double bits_per_signal, double n_signals, const RadioParams& params) {
  require_non_negative(bits_per_signal, "bits_per_signal");
  require_non_negative(n_signals, "n_signals");
  return params.e_da * bits_per_signal * n_signals;
}

void EnergyLedger::record(const EnergyEvent& event) {
  if (event.node >= per_node_.size()) throw ContractViolation("ledger: unknown node id");
  per_node_[event.node] += event.removed;
  total_.add(event.removed);
  if (trace_enabled_) events_.push_back(event);
}

bool debit(Node& node, double amount, EnergyLedger& ledger, EnergyEvent event) {
  if (!node.alive) throw ContractViolation("debit on dead node " + std::to_string(node.id));
  if (!(amount >= 0.0)) throw ContractViolation("negative debit");
  const double before = node.energy;
  const double removed = amount >= before ? before : amount;
  node.energy = before - removed;
  if (node.energy <= 0.0) {
    node.energy = 0.0;
    node.alive = false;
  }
  event.node = node.id;
  event.round = ledger.round();
  event.requested = amount;
  event.removed = removed;
  ledger.record(event);
  return before >= amount;
}

}  // namespace wsn
