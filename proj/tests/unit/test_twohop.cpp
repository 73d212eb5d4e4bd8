#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "covertnet/emit.hpp"
#include "covertnet/errors.hpp"
#include "covertnet/twohop.hpp"
#include "oracles.hpp"

using namespace covertnet;

namespace {

const ChannelParams kChannel{4.0, 1.0, 1.0};

PairAssignment fixed_roles(const Placement& p, std::initializer_list<int> senders, double r_p = 0.0) {
  std::vector<Role> role(p.nodes.size(), Role::kReceiver);
  for (int s : senders) role[static_cast<std::size_t>(s)] = Role::kSender;
  return assign_pairs_with_roles(p, std::move(role), Centric::kSender, r_p);
}

PairRecord record(std::size_t s, std::size_t r, double rate, Phase phase) {
  PairRecord rec;
  rec.sender = s;
  rec.receiver = r;
  rec.rate = rate;
  rec.phase = phase;
  return rec;
}

// 0 -> 1 -> 2 -> 3 -> 0
std::vector<std::size_t> ring4() { return {1, 2, 3, 0}; }

NetworkConfig constant_power(std::int64_t n, double p = 1.0) {
  NetworkConfig c;
  c.n = n;
  c.power_rule = PowerRule::kConstant;
  c.c_tx = p;
  return c;
}

}  // namespace

TEST(Phase, Alternates) {
  EXPECT_EQ(phase_of_slot(1), Phase::kSourceToRelay);
  EXPECT_EQ(phase_of_slot(2), Phase::kRelayToDestination);
  EXPECT_EQ(phase_of_slot(1001), Phase::kSourceToRelay);
}

TEST(TransmitPower, SparseFormula) {
  NetworkConfig c;
  c.n = 10000;
  c.s = 0.5;
  c.alpha = 4.0;
  c.eps_tx = 0.0;
  c.c_tx = 1.0;
  c.power_rule = PowerRule::kSparseFormula;
  EXPECT_NEAR(transmit_power(c), 1e-6, 1e-18);
  c.lambda = 0.5;  // l = 100
  EXPECT_NEAR(transmit_power(c), 1e-7, 1e-19);
}

TEST(TransmitPower, DenseFormula) {
  NetworkConfig c;
  c.n = 10000;
  c.s = 1.0;
  c.alpha = 4.0;
  c.eps_tx = 0.0;
  c.power_rule = PowerRule::kDenseFormula;
  EXPECT_NEAR(transmit_power(c), 1e-8, 1e-20);
}

TEST(TransmitPower, RegimeMismatch) {
  NetworkConfig c;
  c.s = 1.0;
  EXPECT_THROW(formula_power_unit(c, PowerRule::kSparseFormula), ConfigError);
  c.s = 0.5;
  EXPECT_THROW(formula_power_unit(c, PowerRule::kDenseFormula), ConfigError);
  EXPECT_THROW(formula_power_unit(c, PowerRule::kCalibrated), ConfigError);
  EXPECT_DOUBLE_EQ(transmit_power(constant_power(100, 0.25)), 0.25);
}

TEST(Calibration, UnconstrainedHitsGridTop) {
  NetworkConfig c;
  c.n = 256;
  c.delta = std::numeric_limits<double>::infinity();
  const CalibrationReport r = calibrate_power(c);
  EXPECT_TRUE(r.at_grid_top);
  EXPECT_EQ(r.grid_step, 0);
  EXPECT_DOUBLE_EQ(r.power, c.p_max);
}

TEST(Calibration, LargestGridPowerWithinMargin) {
  for (double lambda : {0.0, 1.0, 2.0}) {
    NetworkConfig c;
    c.n = 512;
    c.lambda = lambda;
    const CalibrationOptions opt;
    const CalibrationReport r = calibrate_power(c, opt);
    EXPECT_LE(r.power * r.unit_pilot_max, r.target);
    if (!r.at_grid_top) {
      const double up = r.power * std::pow(10.0, 1.0 / opt.steps_per_decade);
      EXPECT_GT(up * r.unit_pilot_max, r.target);
    }
    EXPECT_NEAR(r.target, 0.9 * std::sqrt(2.0) * std::sqrt(c.delta / c.window_length()), 1e-15);
    EXPECT_NEAR(r.implied_c_tx * formula_power_unit(c, PowerRule::kSparseFormula), r.power, 1e-12 * r.power);
    EXPECT_EQ(r.formula_rule, PowerRule::kSparseFormula);
  }
}

TEST(Calibration, PilotPeakMatchesDirectEvaluation) {
  NetworkConfig c;
  c.n = 300;
  CalibrationOptions opt;
  opt.pilot_slots = 7;
  const CalibrationReport r = calibrate_power(c, opt);
  NetworkConfig pilot = c;
  pilot.seed = derive_seed(c.seed, StreamTag::kPilot);
  SimulationOptions sim;
  sim.power = 1.0;
  sim.compute_rates = false;
  const SimulationResult direct = simulate(pilot, 7, sim);
  double peak = 0.0;
  for (const SlotMetrics& m : direct.slots) peak = std::max(peak, m.max_warden_power);
  EXPECT_DOUBLE_EQ(r.unit_pilot_max, peak);
}

TEST(RunSlot, SinglePairNoWardens) {
  Placement p;
  p.nodes = {{0.0, 0.0}, {0.05, 0.0}};
  const PairAssignment a = fixed_roles(p, {0});
  const SlotResult r = run_slot(p, a, 2e-6, kChannel, Phase::kSourceToRelay);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.warden_powers.empty());
  EXPECT_EQ(r.records[0].interference, 0.0);
  EXPECT_NEAR(r.records[0].rate, std::log(1.0 + 2e-6 / std::pow(0.05, 4.0)), 1e-12);
  EXPECT_NEAR(r.records[0].distance, 0.05, 1e-15);
}

TEST(RunSlot, SymmetricPairsSeeEqualInterference) {
  Placement p;
  p.nodes = {{-0.2, 0.0}, {-0.2, 0.05}, {0.2, 0.0}, {0.2, 0.05}};
  const PairAssignment a = fixed_roles(p, {0, 2});
  const SlotResult r = run_slot(p, a, 1e-3, kChannel, Phase::kRelayToDestination);
  ASSERT_EQ(r.records.size(), 2u);
  const double dx = std::hypot(0.4, 0.05);
  EXPECT_NEAR(r.records[0].interference, 1e-3 / std::pow(dx, 4.0), 1e-15);
  EXPECT_NEAR(r.records[1].interference, r.records[0].interference, 1e-15);
  EXPECT_EQ(r.records[0].phase, Phase::kRelayToDestination);
}

TEST(RunSlot, GiantPreservationRegionSilencesEveryone) {
  NetworkConfig c;
  c.n = 200;
  const Placement p = sample_placement(c, 1);
  Stream roles(1);
  const PairAssignment a = assign_pairs(p, 0.5, Centric::kSender, 10.0, roles);
  EXPECT_EQ(a.suppressed_count(), a.senders.size());
  const SlotResult r = run_slot(p, a, 1.0, kChannel, Phase::kSourceToRelay);
  EXPECT_TRUE(r.records.empty());
  for (double w : r.warden_powers) EXPECT_EQ(w, 0.0);
}

TEST(RunSlot, Singularity) {
  Placement p;
  p.nodes = {{0.1, 0.1}, {0.1, 0.1}};
  const PairAssignment a = fixed_roles(p, {0});
  EXPECT_THROW(run_slot(p, a, 1.0, kChannel, Phase::kSourceToRelay), SingularityError);
  EXPECT_THROW(run_slot(p, a, -1.0, kChannel, Phase::kSourceToRelay), DomainError);
}

TEST(RunSlot, RateIdentityInterferenceAndGating) {
  for (double alpha : {3.0, 4.0, 3.5}) {
    NetworkConfig c;
    c.n = 400;
    c.alpha = alpha;
    const ChannelParams params{alpha, 1.3, 0.7};
    const double p_tx = 1e-4;
    const double r_p = c.preservation_radius();
    const Placement p = sample_placement(c, 3);
    Stream roles(17);
    const PairAssignment a = assign_pairs(p, 0.5, Centric::kSender, r_p, roles);
    const SlotResult r = run_slot(p, a, p_tx, params, Phase::kSourceToRelay);
    EXPECT_EQ(r.records.size(), a.senders.size() - a.suppressed_count());

    std::vector<std::size_t> active;
    for (std::size_t s : a.senders) {
      if (!a.suppressed[s]) active.push_back(s);
    }
    for (const PairRecord& rec : r.records) {
      for (const Point& w : p.wardens) ASSERT_GE(distance(w, p.nodes[rec.sender]), r_p);
      double interference = 0.0;
      for (std::size_t s : active) {
        if (s != rec.sender) interference += p_tx * params.gain * std::pow(distance(p.nodes[s], p.nodes[rec.receiver]), -alpha);
      }
      ASSERT_NEAR(rec.interference, interference, 1e-11 * interference);
      const double want = std::log1p(p_tx * params.gain * std::pow(rec.distance, -alpha) /
                                             (params.n0 + rec.interference));
      ASSERT_NEAR(rec.rate, want, 1e-12 * want);
    }
    for (std::size_t w = 0; w < p.wardens.size(); ++w) {
      double power = 0.0;
      for (std::size_t s : active) power += p_tx * params.gain * std::pow(distance(p.nodes[s], p.wardens[w]), -alpha);
      ASSERT_NEAR(r.warden_powers[w], power, 1e-11 * power);
    }
  }
}

TEST(Destinations, SingleCycle) {
  for (std::size_t n : {2u, 3u, 10u, 1000u}) {
    const auto d = draw_destinations(n, 5);
    std::set<std::size_t> image(d.begin(), d.end());
    EXPECT_EQ(image.size(), n);
    std::size_t at = 0, steps = 0;
    do {
      ASSERT_NE(d[at], at);
      at = d[at];
      ++steps;
    } while (at != 0);
    EXPECT_EQ(steps, n);
  }
  EXPECT_THROW(draw_destinations(1, 5), ConfigError);
}

TEST(Ledger, RejectsBadDestinations) {
  EXPECT_THROW(ThroughputLedger(LedgerMode::kFluid, {0, 1}), ConfigError);
  EXPECT_THROW(ThroughputLedger(LedgerMode::kFluid, {1, 1}), ConfigError);
  EXPECT_THROW(ThroughputLedger(LedgerMode::kPacketBuffer, {1, 0}, {0.0, 1}), ConfigError);
}

TEST(Ledger, ZeroRates) {
  for (LedgerMode mode : {LedgerMode::kFluid, LedgerMode::kPacketBuffer}) {
    ThroughputLedger ledger(mode, ring4());
    for (int slot = 1; slot <= 10; ++slot) {
      const Phase ph = phase_of_slot(slot);
      const std::vector<PairRecord> recs{record(0, 2, 0.0, ph), record(1, 3, 0.0, ph)};
      ledger.accumulate(recs, ph);
    }
    EXPECT_EQ(ledger.slots(), 10);
    EXPECT_EQ(ledger.aggregate_throughput(), 0.0);
    EXPECT_EQ(ledger.aggregate_delivered(), 0.0);
  }
}

TEST(Ledger, FluidTwoHopCarriesHalfTheRate) {
  ThroughputLedger ledger(LedgerMode::kFluid, ring4());
  const double rate = 0.8;
  double phase2_total = 0.0;
  for (int slot = 1; slot <= 100; ++slot) {
    const Phase ph = phase_of_slot(slot);
    std::vector<PairRecord> recs;
    if (ph == Phase::kSourceToRelay) {
      recs = {record(0, 2, rate, ph)};  // relay 2 holds traffic for node 1
    } else {
      recs = {record(2, 1, rate, ph)};
      phase2_total += rate;
    }
    ledger.accumulate(recs, ph);
  }
  EXPECT_NEAR(ledger.aggregate_delivered(), phase2_total / 100.0, 1e-15);
  EXPECT_NEAR(ledger.aggregate_delivered(), rate / 2.0, 1e-15);
  EXPECT_NEAR(ledger.flow_throughput(0), rate / 2.0, 1e-15);
  EXPECT_EQ(ledger.flow_throughput(1), 0.0);
  EXPECT_EQ(ledger.direct_delivered(), 0.0);
}

TEST(Ledger, FluidDirectCountsAsBoth) {
  ThroughputLedger ledger(LedgerMode::kFluid, ring4());
  const std::vector<PairRecord> p1{record(0, 1, 0.5, Phase::kSourceToRelay)};
  const std::vector<PairRecord> p2{record(3, 0, 0.25, Phase::kRelayToDestination)};
  ledger.accumulate(p1, Phase::kSourceToRelay);
  ledger.accumulate(p2, Phase::kRelayToDestination);
  EXPECT_NEAR(ledger.flow_throughput(0), 0.25, 1e-15);
  EXPECT_NEAR(ledger.flow_throughput(3), 0.125, 1e-15);
  EXPECT_NEAR(ledger.direct_delivered(), 0.375, 1e-15);
  EXPECT_NEAR(ledger.aggregate_delivered(), 0.375, 1e-15);
}

TEST(Ledger, PacketRelayTrace) {
  ThroughputLedger ledger(LedgerMode::kPacketBuffer, {1, 2, 0}, {1e-3, 100});
  ledger.accumulate(std::vector<PairRecord>{record(0, 2, 5.5e-3, Phase::kSourceToRelay)}, Phase::kSourceToRelay);
  EXPECT_EQ(ledger.stored_packets(), 5);
  EXPECT_EQ(ledger.delivered_packets(), 0);
  ledger.accumulate(std::vector<PairRecord>{record(2, 1, 3.2e-3, Phase::kRelayToDestination)},
                    Phase::kRelayToDestination);
  EXPECT_EQ(ledger.delivered_packets(), 3);
  EXPECT_EQ(ledger.stored_packets(), 2);
  // Wrong destination: relay 2 holds nothing for node 0, and 2 -> 0 is direct.
  ledger.accumulate(std::vector<PairRecord>{record(2, 0, 4.5e-3, Phase::kRelayToDestination)},
                    Phase::kRelayToDestination);
  EXPECT_EQ(ledger.delivered_packets(), 7);
  EXPECT_EQ(ledger.stored_packets(), 2);
  ledger.accumulate(std::vector<PairRecord>{record(2, 1, 10.5e-3, Phase::kRelayToDestination)},
                    Phase::kRelayToDestination);
  EXPECT_EQ(ledger.delivered_packets(), 9);
  EXPECT_EQ(ledger.stored_packets(), 0);
  EXPECT_EQ(ledger.decodable_packets(), 5 + 3 + 4 + 10);
  EXPECT_NEAR(ledger.flow_throughput(0), 5 * 1e-3 / 4.0, 1e-15);
  EXPECT_NEAR(ledger.flow_throughput(2), 4 * 1e-3 / 4.0, 1e-15);
  EXPECT_NEAR(ledger.direct_delivered(), 4 * 1e-3 / 4.0, 1e-15);
}

TEST(Ledger, PacketQueueCapacity) {
  ThroughputLedger ledger(LedgerMode::kPacketBuffer, ring4(), {1e-3, 3});
  ledger.accumulate(std::vector<PairRecord>{record(0, 2, 5.5e-3, Phase::kSourceToRelay)}, Phase::kSourceToRelay);
  EXPECT_EQ(ledger.stored_packets(), 3);
  ledger.accumulate(std::vector<PairRecord>{record(3, 2, 5.5e-3, Phase::kSourceToRelay)}, Phase::kSourceToRelay);
  EXPECT_EQ(ledger.stored_packets(), 3);
}

TEST(Ledger, BeginMeasurementKeepsQueues) {
  ThroughputLedger ledger(LedgerMode::kPacketBuffer, ring4(), {1e-3, 100});
  ledger.accumulate(std::vector<PairRecord>{record(0, 2, 4.5e-3, Phase::kSourceToRelay)}, Phase::kSourceToRelay);
  ledger.begin_measurement();
  EXPECT_EQ(ledger.slots(), 0);
  EXPECT_EQ(ledger.flow_throughput(0), 0.0);
  EXPECT_EQ(ledger.stored_packets(), 4);
  ledger.accumulate(std::vector<PairRecord>{record(2, 1, 4.5e-3, Phase::kRelayToDestination)},
                    Phase::kRelayToDestination);
  EXPECT_NEAR(ledger.flow_throughput(0), 4e-3, 1e-15);
}

TEST(Ledger, TwoNodePacketSystemIsAllDirect) {
  NetworkConfig c = constant_power(2, 1e-3);
  c.mode = LedgerMode::kPacketBuffer;
  const SimulationResult r = simulate(c, 400);
  EXPECT_GT(r.ledger.decodable_packets(), 0);
  EXPECT_EQ(r.ledger.delivered_packets(), r.ledger.decodable_packets());
  EXPECT_EQ(r.ledger.stored_packets(), 0);
  EXPECT_NEAR(r.ledger.direct_delivered(), r.ledger.aggregate_delivered(), 1e-15);
}

TEST(Ledger, PacketBufferKeepsUpWithFluid) {
  NetworkConfig c = constant_power(16, 1e-4);
  c.packet_nats = 1e-2;
  SimulationOptions opt;
  opt.warmup_slots = 4000;
  NetworkConfig packet = c;
  packet.mode = LedgerMode::kPacketBuffer;
  const SimulationResult fluid = simulate(c, 24000, opt);
  const SimulationResult buffered = simulate(packet, 24000, opt);
  EXPECT_GE(buffered.ledger.aggregate_throughput(), 0.5 * fluid.ledger.aggregate_throughput());
  std::size_t keeping_up = 0;
  for (std::size_t f = 0; f < 16; ++f) {
    keeping_up += buffered.ledger.flow_throughput(f) >= 0.5 * fluid.ledger.flow_throughput(f);
  }
  EXPECT_EQ(keeping_up, 16u);
}

TEST(Simulate, SingleSlotTwoNodes) {
  const SimulationResult r = simulate(constant_power(2), 1);
  ASSERT_EQ(r.slots.size(), 1u);
  EXPECT_LE(r.slots[0].active_pairs, 1u);
  EXPECT_EQ(r.ledger.slots(), 1);
}

TEST(Simulate, Deterministic) {
  NetworkConfig c;
  c.n = 300;
  const SimulationResult a = simulate(c, 40);
  const SimulationResult b = simulate(c, 40);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(a.ledger.aggregate_throughput(), b.ledger.aggregate_throughput());
  c.seed = 2;
  EXPECT_NE(to_csv(simulate(c, 40)), to_csv(a));
}

TEST(Simulate, IndependentOfWorkerCount) {
  NetworkConfig c;
  c.n = 300;
  c.mode = LedgerMode::kPacketBuffer;
  SimulationOptions one, many;
  many.workers = 4;
  many.calibration.workers = 3;
  const SimulationResult a = simulate(c, 70, one);
  const SimulationResult b = simulate(c, 70, many);
  EXPECT_EQ(a.p_tx, b.p_tx);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(to_json(a, c), to_json(b, c));
  EXPECT_EQ(a.ledger.delivered_packets(), b.ledger.delivered_packets());
}

TEST(Simulate, WarmupAndOptions) {
  NetworkConfig c = constant_power(100, 1e-3);
  SimulationOptions opt;
  opt.warmup_slots = 10;
  opt.keep_pair_distances = true;
  const SimulationResult r = simulate(c, 30, opt);
  EXPECT_EQ(r.slots.size(), 30u);
  EXPECT_EQ(r.ledger.slots(), 20);
  EXPECT_EQ(r.slots[0].pair_distances.size(), 50u);
  EXPECT_EQ(r.slots[1].phase, Phase::kRelayToDestination);
  opt.warmup_slots = 30;
  EXPECT_THROW(simulate(c, 30, opt), ConfigError);
  EXPECT_THROW(simulate(c, 0), ConfigError);
}

TEST(Simulate, MetricsAgreeWithRecomputation) {
  NetworkConfig c = constant_power(500, 1e-6);
  c.lambda = 1.0;
  const SimulationResult r = simulate(c, 6);
  const CovertnessBudget budget = budget_of(c);
  for (const SlotMetrics& m : r.slots) {
    const Placement p = sample_placement(c, m.slot);
    Stream roles(derive_seed(c.seed, StreamTag::kRoles, m.slot));
    const PairAssignment a = assign_pairs(p, c.theta, c.centric, c.preservation_radius(), roles);
    const SlotResult s = run_slot(p, a, r.p_tx, channel_of(c), m.phase);
    const double peak = *std::max_element(s.warden_powers.begin(), s.warden_powers.end());
    EXPECT_EQ(m.max_warden_power, peak);
    EXPECT_EQ(m.sufficient_ok, peak <= budget.rho_max_sufficient());
    EXPECT_NEAR(m.max_window_kl, budget.l * kl_gaussian(peak, 1.0), 1e-12 * m.max_window_kl + 1e-300);
    EXPECT_EQ(m.active_pairs, s.records.size());
    EXPECT_EQ(m.suppressed, a.suppressed_count());
  }
}
