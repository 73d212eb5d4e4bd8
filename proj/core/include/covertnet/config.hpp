#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace covertnet {

enum class Centric { kSender, kReceiver };

/// How the common transmit power of unsuppressed senders is chosen.
enum class PowerRule {
  kSparseFormula,  // 0 < s < 1: c_tx l^{-1/2} n^{-(s/2 (alpha-2) + 1) - eps_tx}
  kDenseFormula,   // s >= 1:    c_tx l^{-1/2} n^{-s alpha/2 - eps_tx}
  kCalibrated,     // pilot-batch search on a geometric grid
  kConstant,       // c_tx, independent of n
};

enum class LedgerMode { kFluid, kPacketBuffer };

/// Every model parameter of one network instance.
struct NetworkConfig {
  std::int64_t n = 1024;
  double s = 0.5;       // warden count exponent, n_w = max(1, round(c_w n^s))
  double alpha = 4.0;   // path-loss exponent
  double theta = 0.5;   // sender fraction
  double delta = 0.1;   // KL budget per warden
  double l = 1.0;       // warden testing window (channel uses)
  std::optional<double> lambda;  // when set, l = n^lambda
  double n0 = 1.0;
  double gain = 1.0;
  double p_max = 1.0;   // per-node power cap; top of the calibration grid
  double c_w = 1.0;
  double c_p = 0.2;     // preservation radius r_p = c_p n^{-(s/2 + eps_p)}
  double eps_p = 0.02;
  double eps_tx = 0.02;
  double c_tx = 1.0;
  bool warden_mobile = true;
  Centric centric = Centric::kSender;
  PowerRule power_rule = PowerRule::kCalibrated;
  LedgerMode mode = LedgerMode::kFluid;
  std::uint64_t seed = 1;
  double packet_nats = 1e-3;              // PacketBuffer packet size
  std::int64_t queue_capacity = 1 << 20;  // PacketBuffer packets per relay

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  std::int64_t warden_count() const;
  double preservation_radius() const;
  double window_length() const;
  std::int64_t sender_count() const;
};

std::string_view to_string(Centric c);
std::string_view to_string(PowerRule r);
std::string_view to_string(LedgerMode m);
Centric parse_centric(std::string_view text);
PowerRule parse_power_rule(std::string_view text);
LedgerMode parse_ledger_mode(std::string_view text);

}  // namespace covertnet
