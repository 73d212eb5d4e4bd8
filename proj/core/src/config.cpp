#include "covertnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "covertnet/errors.hpp"

namespace covertnet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(n >= 2, "n must be at least 2");
  require(s > 0.0 && std::isfinite(s), "s must be positive");
  require(alpha > 2.0 && std::isfinite(alpha), "alpha must exceed 2");
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
  require(delta > 0.0, "delta must be positive");
  require(n0 > 0.0 && std::isfinite(n0), "N0 must be positive");
  require(gain > 0.0 && std::isfinite(gain), "G must be positive");
  require(p_max > 0.0 && std::isfinite(p_max), "p_max must be positive");
  require(c_w > 0.0, "c_w must be positive");
  require(c_p > 0.0, "c_p must be positive");
  require(eps_p >= 0.0, "eps_p must be non-negative");
  require(eps_tx >= 0.0, "eps_tx must be non-negative");
  require(c_tx > 0.0 && std::isfinite(c_tx), "c_tx must be positive");
  require(packet_nats > 0.0, "packet_nats must be positive");
  require(queue_capacity >= 1, "queue_capacity must be at least 1");
  if (lambda) require(*lambda >= 0.0 && std::isfinite(*lambda), "lambda must be non-negative");
  require(window_length() >= 1.0, "l must be at least 1");
  const auto senders = sender_count();
  require(senders >= 1 && senders <= n - 1, "theta*n must leave at least one sender and one receiver");
  if (power_rule == PowerRule::kSparseFormula) {
    require(s < 1.0, "sparse-warden power formula requires 0 < s < 1");
  }
  if (power_rule == PowerRule::kDenseFormula) {
    require(s >= 1.0, "dense-warden power formula requires s >= 1");
  }
}

std::int64_t NetworkConfig::warden_count() const {
  const double raw = std::round(c_w * std::pow(static_cast<double>(n), s));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(raw));
}

double NetworkConfig::preservation_radius() const {
  return c_p * std::pow(static_cast<double>(n), -(s / 2.0 + eps_p));
}

double NetworkConfig::window_length() const {
  return lambda ? std::pow(static_cast<double>(n), *lambda) : l;
}

std::int64_t NetworkConfig::sender_count() const {
  return static_cast<std::int64_t>(std::round(theta * static_cast<double>(n)));
}

std::string_view to_string(Centric c) {
  return c == Centric::kSender ? "sender" : "receiver";
}

std::string_view to_string(PowerRule r) {
  switch (r) {
    case PowerRule::kSparseFormula: return "sparse";
    case PowerRule::kDenseFormula: return "dense";
    case PowerRule::kCalibrated: return "calibrated";
    case PowerRule::kConstant: return "constant";
  }
  return "unknown";
}

std::string_view to_string(LedgerMode m) {
  return m == LedgerMode::kFluid ? "fluid" : "packet";
}

Centric parse_centric(std::string_view text) {
  if (text == "sender") return Centric::kSender;
  if (text == "receiver") return Centric::kReceiver;
  throw ConfigError("unknown pairing rule: " + std::string(text));
}

PowerRule parse_power_rule(std::string_view text) {
  if (text == "sparse") return PowerRule::kSparseFormula;
  if (text == "dense") return PowerRule::kDenseFormula;
  if (text == "calibrated") return PowerRule::kCalibrated;
  if (text == "constant") return PowerRule::kConstant;
  throw ConfigError("unknown power rule: " + std::string(text));
}

LedgerMode parse_ledger_mode(std::string_view text) {
  if (text == "fluid") return LedgerMode::kFluid;
  if (text == "packet") return LedgerMode::kPacketBuffer;
  throw ConfigError("unknown ledger mode: " + std::string(text));
}

}  // namespace covertnet
