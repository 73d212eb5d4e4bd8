#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "covertnet/channel.hpp"
#include "covertnet/config.hpp"
#include "covertnet/geometry.hpp"

namespace covertnet {

/// Odd slots carry source -> relay traffic, even slots relay -> destination.
enum class Phase { kSourceToRelay, kRelayToDestination };

inline Phase phase_of_slot(std::uint64_t slot) {
  return slot % 2 == 1 ? Phase::kSourceToRelay : Phase::kRelayToDestination;
}

std::string_view to_string(Phase p);

ChannelParams channel_of(const NetworkConfig& config);
CovertnessBudget budget_of(const NetworkConfig& config);

struct CalibrationOptions {
  int pilot_slots = 50;
  int steps_per_decade = 40;
  int decades = 40;
  double margin = 0.9;  // pilot peak must stay below margin * rho_max_sufficient
  int workers = 1;
};

struct CalibrationReport {
  double power = 0.0;
  double unit_pilot_max = 0.0;  // max warden power over the pilot batch at P = 1
  double threshold = 0.0;       // rho_max_sufficient
  double target = 0.0;          // margin * threshold
  int grid_step = 0;            // power = p_max 10^{-grid_step / steps_per_decade}
  bool at_grid_top = false;
  PowerRule formula_rule = PowerRule::kSparseFormula;
  double implied_c_tx = 0.0;    // coefficient of the formula rule matching s
};

/// Largest power on the geometric grid whose pilot-batch peak warden power
/// stays within the safety margin. Pilot slots use a stream separate from the
/// simulated slots.
CalibrationReport calibrate_power(const NetworkConfig& config, const CalibrationOptions& options = {});

/// Formula power without the coefficient c_tx.
double formula_power_unit(const NetworkConfig& config, PowerRule rule);

/// The common transmit power chosen by config.power_rule.
double transmit_power(const NetworkConfig& config, const CalibrationOptions& options = {});

struct PairRecord {
  std::size_t sender = 0;
  std::size_t receiver = 0;
  double distance = 0.0;
  Phase phase = Phase::kSourceToRelay;
  double interference = 0.0;
  double sinr = 0.0;
  double rate = 0.0;  // nats per channel use
};

struct SlotResult {
  std::vector<PairRecord> records;   // unsuppressed pairs only
  std::vector<double> warden_powers;
};

/// SINR rates of every unsuppressed pair, with all other unsuppressed senders
/// as interference, and the received power at each warden. Rates are skipped
/// when with_rates is false.
SlotResult run_slot(const Placement& placement, const PairAssignment& assignment, double p_tx,
                    const ChannelParams& params, Phase phase, bool with_rates = true);

/// Source -> destination map: a uniformly random cyclic permutation, so no
/// node is its own destination.
std::vector<std::size_t> draw_destinations(std::size_t n, std::uint64_t seed);

struct PacketOptions {
  double packet_nats = 1e-3;
  std::int64_t queue_capacity = 1 << 20;
};

/// Long-term throughput accounting for the n source -> destination flows.
///
/// Fluid: phase-1 rates are first-hop supply of the sender's flow; phase-2
/// rates are delivery to the flow ending at the receiver. A flow's long-term
/// throughput is min(supply, delivery) / slots. Direct source -> destination
/// transmissions count as both, in either phase.
///
/// PacketBuffer: transmissions move whole packets of packet_nats; relays keep
/// per-destination FIFO queues and a flow is credited only on receipt at its
/// destination.
class ThroughputLedger {
 public:
  ThroughputLedger(LedgerMode mode, std::vector<std::size_t> destination,
                   PacketOptions packets = {});

  void accumulate(std::span<const PairRecord> records, Phase phase);

  /// Zeroes the counters and the slot count; relay queues are kept.
  void begin_measurement();

  LedgerMode mode() const { return mode_; }
  std::int64_t slots() const { return slots_; }
  std::size_t flows() const { return destination_.size(); }
  std::size_t destination(std::size_t source) const { return destination_[source]; }

  double flow_throughput(std::size_t source) const;
  double aggregate_throughput() const;
  double aggregate_delivered() const;
  double direct_delivered() const;

  std::int64_t delivered_packets() const { return delivered_total_; }
  std::int64_t decodable_packets() const { return decodable_; }
  std::int64_t stored_packets() const;

 private:
  struct Run {
    std::size_t source;
    std::int64_t birth;
    std::int64_t count;
  };

  std::int64_t decodable(double rate) const;
  void accumulate_fluid(const PairRecord& r, Phase phase);
  void accumulate_packets(const PairRecord& r, Phase phase);

  LedgerMode mode_;
  std::vector<std::size_t> destination_;
  std::vector<std::size_t> source_of_;
  PacketOptions packets_;
  std::int64_t slots_ = 0;
  std::int64_t clock_ = 0;

  std::vector<double> supply_;
  std::vector<double> delivery_;
  double direct_ = 0.0;

  std::vector<std::map<std::size_t, std::deque<Run>>> queues_;  // relay -> destination -> FIFO
  std::vector<std::int64_t> stored_;
  std::vector<std::int64_t> delivered_;
  std::int64_t delivered_total_ = 0;
  std::int64_t direct_packets_ = 0;
  std::int64_t decodable_ = 0;
};

struct SlotMetrics {
  std::uint64_t slot = 0;
  Phase phase = Phase::kSourceToRelay;
  std::size_t senders = 0;
  std::size_t suppressed = 0;
  std::size_t active_pairs = 0;
  double max_warden_power = 0.0;
  double mean_warden_power = 0.0;
  double max_window_kl = 0.0;
  bool sufficient_ok = true;
  bool necessary_ok = true;
  bool exact_kl_ok = true;
  double aggregate_rate = 0.0;
  std::size_t interference_exceed = 0;  // pairs with I >= P n^{alpha/2 + margin}
  std::vector<double> pair_distances;   // every assigned pair, when requested
};

struct SimulationOptions {
  int workers = 1;
  bool compute_rates = true;
  bool keep_pair_distances = false;
  double interference_margin = 0.1;
  std::optional<double> power;     // bypasses config.power_rule
  std::int64_t warmup_slots = 0;   // ledger measurement starts after these
  CalibrationOptions calibration;
};

struct SimulationResult {
  double p_tx = 0.0;
  std::optional<CalibrationReport> calibration;
  std::vector<SlotMetrics> slots;
  ThroughputLedger ledger;
};

/// Runs slots 1..slots. Deterministic in (config, slots, options) for any
/// worker count: slot streams are derived from (seed, slot) and the ledger
/// consumes slot results in slot order.
SimulationResult simulate(const NetworkConfig& config, std::int64_t slots,
                          const SimulationOptions& options = {});

}  // namespace covertnet
