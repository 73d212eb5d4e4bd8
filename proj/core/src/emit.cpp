#include "covertnet/emit.hpp"

#include <fstream>

#include <fmt/format.h>

#include "covertnet/errors.hpp"
#include "json.hpp"

namespace covertnet {

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const NetworkConfig& c) {
  ordered_json j;
  j["n"] = c.n;
  j["s"] = c.s;
  j["alpha"] = c.alpha;
  j["theta"] = c.theta;
  j["delta"] = c.delta;
  j["l"] = c.l;
  j["lambda"] = c.lambda ? ordered_json(*c.lambda) : ordered_json(nullptr);
  j["N0"] = c.n0;
  j["G"] = c.gain;
  j["p_max"] = c.p_max;
  j["c_w"] = c.c_w;
  j["c_p"] = c.c_p;
  j["eps_p"] = c.eps_p;
  j["eps_tx"] = c.eps_tx;
  j["c_tx"] = c.c_tx;
  j["warden_mobile"] = c.warden_mobile;
  j["centric"] = to_string(c.centric);
  j["power_rule"] = to_string(c.power_rule);
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  j["packet_nats"] = c.packet_nats;
  j["queue_capacity"] = c.queue_capacity;
  return j;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  throw ConfigError("unknown output format: " + std::string(text));
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string to_csv(const SweepResult& result) {
  if (result.points.empty()) throw EmitError("no results to emit");
  std::string out(kCsvHeader);
  out += '\n';
  for (const SweepPoint& p : result.points) {
    out += fmt::format("{},{},{},{},{}\n", p.n, p.trial, p.seed, to_string(p.metric),
                       format_double(p.value));
  }
  return out;
}

std::string to_json(const SweepResult& result) {
  if (result.points.empty()) throw EmitError("no results to emit");
  ordered_json doc;
  doc["config"] = config_json(result.base);

  ordered_json sweep;
  sweep["n_grid"] = result.spec.n_grid;
  sweep["slots_per_n"] = result.spec.slots_per_n;
  sweep["trials_per_n"] = result.spec.trials_per_n;
  sweep["interference_margin"] = result.spec.interference_margin;
  ordered_json metrics = ordered_json::array();
  for (Metric m : result.spec.metrics) metrics.push_back(to_string(m));
  sweep["metrics"] = metrics;
  doc["sweep"] = sweep;
  doc["powers"] = result.powers;

  ordered_json fits = ordered_json::array();
  for (const ScalingFit& f : result.fits) {
    ordered_json j;
    j["metric"] = f.metric;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    j["predicted_slope"] = f.predicted_slope;
    j["abs_error"] = f.abs_error;
    j["residuals"] = f.residuals;
    j["flagged"] = f.flagged;
    fits.push_back(j);
  }
  doc["fits"] = fits;

  ordered_json medians = ordered_json::array();
  for (const GridSummary& g : result.medians) {
    medians.push_back({{"n", g.n}, {"metric", to_string(g.metric)}, {"median", g.median}});
  }
  doc["medians"] = medians;

  ordered_json points = ordered_json::array();
  for (const SweepPoint& p : result.points) {
    points.push_back({{"n", p.n},
                      {"trial", p.trial},
                      {"seed", p.seed},
                      {"metric", to_string(p.metric)},
                      {"value", p.value}});
  }
  doc["points"] = points;

  doc["metadata"] = {{"throughput", "aggregate_delivered"},
                     {"direct_phase1_delivery_credited", true},
                     {"median_across_trials", true}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const SimulationResult& result) {
  std::string out(kSlotCsvHeader);
  out += '\n';
  for (const SlotMetrics& m : result.slots) {
    out += fmt::format("{},{},{},{},{},{},{},{},{:d},{:d},{:d},{},{}\n", m.slot, to_string(m.phase),
                       m.senders, m.suppressed, m.active_pairs, format_double(m.max_warden_power),
                       format_double(m.mean_warden_power), format_double(m.max_window_kl),
                       static_cast<int>(m.sufficient_ok), static_cast<int>(m.necessary_ok),
                       static_cast<int>(m.exact_kl_ok), format_double(m.aggregate_rate),
                       m.interference_exceed);
  }
  return out;
}

std::string to_json(const SimulationResult& result, const NetworkConfig& config) {
  ordered_json doc;
  doc["config"] = config_json(config);
  doc["p_tx"] = result.p_tx;
  if (result.calibration) {
    const CalibrationReport& c = *result.calibration;
    doc["calibration"] = {{"power", c.power},
                          {"unit_pilot_max", c.unit_pilot_max},
                          {"threshold", c.threshold},
                          {"target", c.target},
                          {"grid_step", c.grid_step},
                          {"at_grid_top", c.at_grid_top},
                          {"formula_rule", to_string(c.formula_rule)},
                          {"implied_c_tx", c.implied_c_tx}};
  } else {
    doc["calibration"] = nullptr;
  }
  const ThroughputLedger& ledger = result.ledger;
  doc["ledger"] = {{"mode", to_string(ledger.mode())},
                   {"slots", ledger.slots()},
                   {"aggregate_throughput", ledger.aggregate_throughput()},
                   {"aggregate_delivered", ledger.aggregate_delivered()},
                   {"direct_delivered", ledger.direct_delivered()},
                   {"delivered_packets", ledger.delivered_packets()},
                   {"stored_packets", ledger.stored_packets()}};
  ordered_json slots = ordered_json::array();
  for (const SlotMetrics& m : result.slots) {
    slots.push_back({{"slot", m.slot},
                     {"phase", to_string(m.phase)},
                     {"senders", m.senders},
                     {"suppressed", m.suppressed},
                     {"active_pairs", m.active_pairs},
                     {"max_warden_power", m.max_warden_power},
                     {"mean_warden_power", m.mean_warden_power},
                     {"max_window_kl", m.max_window_kl},
                     {"sufficient_ok", m.sufficient_ok},
                     {"necessary_ok", m.necessary_ok},
                     {"exact_kl_ok", m.exact_kl_ok},
                     {"aggregate_rate", m.aggregate_rate},
                     {"interference_exceed", m.interference_exceed}});
  }
  doc["slots"] = slots;
  return doc.dump(2) + "\n";
}

void emit(const SweepResult& result, Format format, const std::filesystem::path& path) {
  const std::string text = format == Format::kCsv ? to_csv(result) : to_json(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EmitError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw EmitError("failed writing " + path.string());
}

}  // namespace covertnet
