#include "covertnet/twohop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "covertnet/errors.hpp"
#include "covertnet/parallel.hpp"
#include "covertnet/rng.hpp"

namespace covertnet {

namespace {

constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();
constexpr double kGuardSq = kMinSeparation * kMinSeparation;

[[noreturn]] void throw_singular() {
  throw SingularityError("transmitter within minimum separation of a receiving point");
}

/// Positions of the senders that transmit in a slot, struct-of-arrays.
struct ActiveSenders {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::size_t> slot_of;  // node id -> index into xs/ys, or kNoIndex
};

ActiveSenders collect_active(const Placement& placement, const PairAssignment& assignment) {
  ActiveSenders a;
  a.slot_of.assign(placement.nodes.size(), kNoIndex);
  for (std::size_t s : assignment.senders) {
    if (assignment.suppressed[s]) continue;
    a.slot_of[s] = a.xs.size();
    a.xs.push_back(placement.nodes[s].x);
    a.ys.push_back(placement.nodes[s].y);
  }
  return a;
}

/// Sum over active senders (except `skip`) of d^-alpha to q, times G.
double gain_sum(Point q, const ActiveSenders& a, std::size_t skip, const ChannelParams& params) {
  const std::size_t m = a.xs.size();
  const double* xs = a.xs.data();
  const double* ys = a.ys.data();
  double sum = 0.0;
  auto loop = [&](auto term) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == skip) continue;
      const double dx = xs[i] - q.x;
      const double dy = ys[i] - q.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < kGuardSq) throw_singular();
      sum += term(d2);
    }
  };
  if (params.alpha == 4.0) {
    loop([](double d2) { return 1.0 / (d2 * d2); });
  } else if (params.alpha == 3.0) {
    loop([](double d2) { return 1.0 / (d2 * std::sqrt(d2)); });
  } else {
    const double half = -0.5 * params.alpha;
    loop([half](double d2) { return std::pow(d2, half); });
  }
  return params.gain * sum;
}

}  // namespace

std::string_view to_string(Phase p) {
  return p == Phase::kSourceToRelay ? "source_to_relay" : "relay_to_destination";
}

ChannelParams channel_of(const NetworkConfig& config) {
  return {config.alpha, config.gain, config.n0};
}

CovertnessBudget budget_of(const NetworkConfig& config) {
  return {config.delta, config.window_length(), config.n0};
}

SlotResult run_slot(const Placement& placement, const PairAssignment& assignment, double p_tx,
                    const ChannelParams& params, Phase phase, bool with_rates) {
  if (!(p_tx >= 0.0)) throw DomainError("run_slot: transmit power must be non-negative");
  const ActiveSenders active = collect_active(placement, assignment);

  SlotResult out;
  out.warden_powers.reserve(placement.wardens.size());
  for (Point w : placement.wardens) {
    out.warden_powers.push_back(p_tx == 0.0 ? 0.0 : p_tx * gain_sum(w, active, kNoIndex, params));
  }
  if (!with_rates) return out;

  out.records.reserve(active.xs.size());
  for (const Link& link : assignment.pairs) {
    if (assignment.suppressed[link.sender]) continue;
    const Point rx = placement.nodes[link.receiver];
    const double d2 = distance_sq(placement.nodes[link.sender], rx);
    PairRecord rec;
    rec.sender = link.sender;
    rec.receiver = link.receiver;
    rec.distance = std::sqrt(d2);
    rec.phase = phase;
    const double signal = p_tx * path_gain_sq(d2, params);
    rec.interference = p_tx * gain_sum(rx, active, active.slot_of[link.sender], params);
    rec.sinr = signal / (params.n0 + rec.interference);
    rec.rate = std::log1p(rec.sinr);
    out.records.push_back(rec);
  }
  return out;
}

double formula_power_unit(const NetworkConfig& config, PowerRule rule) {
  const double n = static_cast<double>(config.n);
  const double l = config.window_length();
  switch (rule) {
    case PowerRule::kSparseFormula:
      if (!(config.s > 0.0 && config.s < 1.0)) {
        throw ConfigError("sparse-warden power formula requires 0 < s < 1");
      }
      return std::pow(l, -0.5) *
             std::pow(n, -(config.s / 2.0 * (config.alpha - 2.0) + 1.0) - config.eps_tx);
    case PowerRule::kDenseFormula:
      if (!(config.s >= 1.0)) throw ConfigError("dense-warden power formula requires s >= 1");
      return std::pow(l, -0.5) * std::pow(n, -config.s * config.alpha / 2.0 - config.eps_tx);
    case PowerRule::kConstant:
      return 1.0;
    case PowerRule::kCalibrated:
      break;
  }
  throw ConfigError("calibrated power has no closed form");
}

CalibrationReport calibrate_power(const NetworkConfig& config, const CalibrationOptions& options) {
  config.validate();
  if (options.pilot_slots < 1 || options.steps_per_decade < 1 || options.decades < 1 ||
      !(options.margin > 0.0)) {
    throw ConfigError("invalid calibration options");
  }

  NetworkConfig pilot = config;
  pilot.seed = derive_seed(config.seed, StreamTag::kPilot);
  const ChannelParams params = channel_of(config);

  std::vector<double> peaks(static_cast<std::size_t>(options.pilot_slots), 0.0);
  parallel_for(peaks.size(), options.workers, [&](std::size_t i) {
    const std::uint64_t slot = i + 1;
    const Placement placement = sample_placement(pilot, slot);
    Stream roles(derive_seed(pilot.seed, StreamTag::kRoles, slot));
    const PairAssignment assignment = assign_pairs(placement, pilot.theta, pilot.centric,
                                                   pilot.preservation_radius(), roles);
    const SlotResult unit = run_slot(placement, assignment, 1.0, params, phase_of_slot(slot), false);
    peaks[i] = unit.warden_powers.empty()
                   ? 0.0
                   : *std::max_element(unit.warden_powers.begin(), unit.warden_powers.end());
  });

  CalibrationReport report;
  report.unit_pilot_max = *std::max_element(peaks.begin(), peaks.end());
  report.threshold = budget_of(config).rho_max_sufficient();
  report.target = options.margin * report.threshold;

  const int last = options.steps_per_decade * options.decades;
  auto grid = [&](int k) {
    return config.p_max * std::pow(10.0, -static_cast<double>(k) / options.steps_per_decade);
  };
  auto fits = [&](int k) { return grid(k) * report.unit_pilot_max <= report.target; };

  int k = 0;
  if (report.unit_pilot_max > 0.0 && std::isfinite(report.target)) {
    const double start = std::ceil(options.steps_per_decade *
                                   std::log10(config.p_max * report.unit_pilot_max / report.target));
    k = static_cast<int>(std::clamp(start, 0.0, static_cast<double>(last)));
    while (k > 0 && fits(k - 1)) --k;
    while (k <= last && !fits(k)) ++k;
    if (k > last) throw ConfigError("no power on the calibration grid satisfies covertness");
  }
  report.grid_step = k;
  report.at_grid_top = (k == 0);
  report.power = grid(k);
  report.formula_rule = config.s < 1.0 ? PowerRule::kSparseFormula : PowerRule::kDenseFormula;
  report.implied_c_tx = report.power / formula_power_unit(config, report.formula_rule);
  return report;
}

double transmit_power(const NetworkConfig& config, const CalibrationOptions& options) {
  if (config.power_rule == PowerRule::kCalibrated) return calibrate_power(config, options).power;
  return config.c_tx * formula_power_unit(config, config.power_rule);
}

std::vector<std::size_t> draw_destinations(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("flows need at least two nodes");
  std::vector<std::size_t> dest(n);
  std::iota(dest.begin(), dest.end(), std::size_t{0});
  // Sattolo's algorithm: a uniformly random single cycle.
  Stream stream(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(dest[i], dest[j]);
  }
  return dest;
}

// ThroughputLedger

ThroughputLedger::ThroughputLedger(LedgerMode mode, std::vector<std::size_t> destination,
                                   PacketOptions packets)
    : mode_(mode), destination_(std::move(destination)), packets_(packets) {
  const std::size_t n = destination_.size();
  source_of_.assign(n, kNoIndex);
  for (std::size_t s = 0; s < n; ++s) {
    if (destination_[s] >= n || source_of_[destination_[s]] != kNoIndex || destination_[s] == s) {
      throw ConfigError("destinations must form a permutation without fixed points");
    }
    source_of_[destination_[s]] = s;
  }
  if (!(packets_.packet_nats > 0.0) || packets_.queue_capacity < 1) {
    throw ConfigError("invalid packet options");
  }
  supply_.assign(n, 0.0);
  delivery_.assign(n, 0.0);
  if (mode_ == LedgerMode::kPacketBuffer) {
    queues_.resize(n);
    stored_.assign(n, 0);
    delivered_.assign(n, 0);
  }
}

std::int64_t ThroughputLedger::decodable(double rate) const {
  const double k = std::floor(rate / packets_.packet_nats);
  return k >= 9e15 ? std::int64_t{9'000'000'000'000'000} : static_cast<std::int64_t>(k);
}

void ThroughputLedger::accumulate(std::span<const PairRecord> records, Phase phase) {
  for (const PairRecord& r : records) {
    if (mode_ == LedgerMode::kFluid) {
      accumulate_fluid(r, phase);
    } else {
      accumulate_packets(r, phase);
    }
  }
  ++slots_;
  ++clock_;
}

void ThroughputLedger::accumulate_fluid(const PairRecord& r, Phase phase) {
  const bool direct = destination_[r.sender] == r.receiver;
  if (phase == Phase::kSourceToRelay) {
    supply_[r.sender] += r.rate;
    if (direct) {
      delivery_[r.sender] += r.rate;
      direct_ += r.rate;
    }
  } else {
    delivery_[source_of_[r.receiver]] += r.rate;
    if (direct) {
      supply_[r.sender] += r.rate;
      direct_ += r.rate;
    }
  }
}

void ThroughputLedger::accumulate_packets(const PairRecord& r, Phase phase) {
  std::int64_t budget = decodable(r.rate);
  decodable_ += budget;
  if (budget == 0) return;
  const bool direct = destination_[r.sender] == r.receiver;

  if (phase == Phase::kSourceToRelay) {
    if (direct) {
      delivered_[r.sender] += budget;
      delivered_total_ += budget;
      direct_packets_ += budget;
      return;
    }
    const std::int64_t room = packets_.queue_capacity - stored_[r.receiver];
    const std::int64_t accepted = std::min(budget, room);
    if (accepted <= 0) return;
    auto& fifo = queues_[r.receiver][destination_[r.sender]];
    if (!fifo.empty() && fifo.back().source == r.sender && fifo.back().birth == clock_) {
      fifo.back().count += accepted;
    } else {
      fifo.push_back({r.sender, clock_, accepted});
    }
    stored_[r.receiver] += accepted;
    return;
  }

  // Relay -> destination: oldest stored packets for this receiver first.
  auto& held = queues_[r.sender];
  if (auto it = held.find(r.receiver); it != held.end()) {
    auto& fifo = it->second;
    while (budget > 0 && !fifo.empty()) {
      Run& run = fifo.front();
      const std::int64_t moved = std::min(budget, run.count);
      run.count -= moved;
      budget -= moved;
      stored_[r.sender] -= moved;
      delivered_[run.source] += moved;
      delivered_total_ += moved;
      if (run.count == 0) fifo.pop_front();
    }
    if (fifo.empty()) held.erase(it);
  }
  if (budget > 0 && direct) {
    delivered_[r.sender] += budget;
    delivered_total_ += budget;
    direct_packets_ += budget;
  }
}

void ThroughputLedger::begin_measurement() {
  slots_ = 0;
  std::fill(supply_.begin(), supply_.end(), 0.0);
  std::fill(delivery_.begin(), delivery_.end(), 0.0);
  direct_ = 0.0;
  std::fill(delivered_.begin(), delivered_.end(), 0);
  delivered_total_ = 0;
  direct_packets_ = 0;
  decodable_ = 0;
}

double ThroughputLedger::flow_throughput(std::size_t source) const {
  if (slots_ == 0) return 0.0;
  const double t = static_cast<double>(slots_);
  if (mode_ == LedgerMode::kFluid) return std::min(supply_[source], delivery_[source]) / t;
  return static_cast<double>(delivered_[source]) * packets_.packet_nats / t;
}

double ThroughputLedger::aggregate_throughput() const {
  double total = 0.0;
  for (std::size_t f = 0; f < destination_.size(); ++f) total += flow_throughput(f);
  return total;
}

double ThroughputLedger::aggregate_delivered() const {
  if (slots_ == 0) return 0.0;
  const double t = static_cast<double>(slots_);
  if (mode_ == LedgerMode::kFluid) {
    return std::accumulate(delivery_.begin(), delivery_.end(), 0.0) / t;
  }
  return static_cast<double>(delivered_total_) * packets_.packet_nats / t;
}

double ThroughputLedger::direct_delivered() const {
  if (slots_ == 0) return 0.0;
  const double t = static_cast<double>(slots_);
  if (mode_ == LedgerMode::kFluid) return direct_ / t;
  return static_cast<double>(direct_packets_) * packets_.packet_nats / t;
}

std::int64_t ThroughputLedger::stored_packets() const {
  return std::accumulate(stored_.begin(), stored_.end(), std::int64_t{0});
}

// simulate

namespace {

struct SlotOutcome {
  SlotMetrics metrics;
  std::vector<PairRecord> records;
};

SlotOutcome run_one(const NetworkConfig& config, std::uint64_t slot, double p_tx,
                    const SimulationOptions& options, const ChannelParams& params,
                    const CovertnessBudget& budget) {
  const Placement placement = sample_placement(config, slot);
  Stream roles(derive_seed(config.seed, StreamTag::kRoles, slot));
  const PairAssignment assignment = assign_pairs(placement, config.theta, config.centric,
                                                 config.preservation_radius(), roles);
  const Phase phase = phase_of_slot(slot);
  SlotResult result = run_slot(placement, assignment, p_tx, params, phase, options.compute_rates);

  SlotOutcome out;
  SlotMetrics& m = out.metrics;
  m.slot = slot;
  m.phase = phase;
  m.senders = assignment.senders.size();
  m.suppressed = assignment.suppressed_count();
  m.active_pairs = result.records.size();
  if (!result.warden_powers.empty()) {
    m.max_warden_power = *std::max_element(result.warden_powers.begin(), result.warden_powers.end());
    m.mean_warden_power =
        std::accumulate(result.warden_powers.begin(), result.warden_powers.end(), 0.0) /
        static_cast<double>(result.warden_powers.size());
  }
  const CovertnessVerdict verdict = covertness_check_constant(result.warden_powers, budget);
  m.sufficient_ok = verdict.sufficient_ok;
  m.necessary_ok = verdict.necessary_ok;
  m.exact_kl_ok = verdict.exact_kl_ok;
  if (!verdict.exact_kl.empty()) {
    m.max_window_kl = *std::max_element(verdict.exact_kl.begin(), verdict.exact_kl.end());
  }

  const double interference_limit =
      p_tx * std::pow(static_cast<double>(config.n), config.alpha / 2.0 + options.interference_margin);
  for (const PairRecord& r : result.records) {
    m.aggregate_rate += r.rate;
    if (r.interference >= interference_limit) ++m.interference_exceed;
  }
  if (options.keep_pair_distances) {
    m.pair_distances.reserve(assignment.pairs.size());
    for (const Link& link : assignment.pairs) {
      m.pair_distances.push_back(
          distance(placement.nodes[link.sender], placement.nodes[link.receiver]));
    }
  }
  out.records = std::move(result.records);
  return out;
}

}  // namespace

SimulationResult simulate(const NetworkConfig& config, std::int64_t slots,
                          const SimulationOptions& options) {
  config.validate();
  if (slots < 1) throw ConfigError("simulate needs at least one slot");
  if (options.warmup_slots < 0 || options.warmup_slots >= slots) {
    throw ConfigError("warm-up must leave at least one measured slot");
  }

  std::optional<CalibrationReport> calibration;
  double p_tx = 0.0;
  if (options.power) {
    p_tx = *options.power;
  } else if (config.power_rule == PowerRule::kCalibrated) {
    calibration = calibrate_power(config, options.calibration);
    p_tx = calibration->power;
  } else {
    p_tx = transmit_power(config, options.calibration);
  }

  SimulationResult result{
      p_tx, calibration, {},
      ThroughputLedger(config.mode,
                       draw_destinations(static_cast<std::size_t>(config.n),
                                         derive_seed(config.seed, StreamTag::kFlows)),
                       PacketOptions{config.packet_nats, config.queue_capacity})};
  result.slots.reserve(static_cast<std::size_t>(slots));

  const ChannelParams params = channel_of(config);
  const CovertnessBudget budget = budget_of(config);
  const auto chunk = static_cast<std::int64_t>(std::max(16, 4 * std::max(1, options.workers)));
  std::vector<SlotOutcome> batch;
  for (std::int64_t first = 1; first <= slots; first += chunk) {
    const std::int64_t count = std::min(chunk, slots - first + 1);
    batch.assign(static_cast<std::size_t>(count), {});
    parallel_for(batch.size(), options.workers, [&](std::size_t i) {
      batch[i] = run_one(config, static_cast<std::uint64_t>(first) + i, p_tx, options, params, budget);
    });
    for (SlotOutcome& outcome : batch) {
      if (options.compute_rates) result.ledger.accumulate(outcome.records, outcome.metrics.phase);
      if (options.warmup_slots > 0 &&
          static_cast<std::int64_t>(outcome.metrics.slot) == options.warmup_slots) {
        result.ledger.begin_measurement();
      }
      result.slots.push_back(std::move(outcome.metrics));
    }
  }
  return result;
}

}  // namespace covertnet
