#pragma once

#include <span>
#include <vector>

namespace covertnet {

/// Separation below which a transmitter and a receiving point are treated as
/// coincident. The slot is aborted with SingularityError instead of clamping.
inline constexpr double kMinSeparation = 1e-12;

/// Power-only path-loss channel: received power P G / d^alpha.
struct ChannelParams {
  double alpha = 4.0;
  double gain = 1.0;
  double n0 = 1.0;

  void validate() const;
};

/// G / d^alpha from a squared distance. Throws SingularityError when
/// d < kMinSeparation.
double path_gain_sq(double dist_sq, const ChannelParams& params);

/// Sum of P_i G / d_i^alpha. Entries with zero power contribute nothing and are
/// not subject to the separation guard.
double received_power(std::span<const double> tx_powers, std::span<const double> distances,
                      const ChannelParams& params);

/// D(CN(0, N0 + rho) || CN(0, N0)) = rho/N0 - ln(1 + rho/N0), in nats.
double kl_gaussian(double rho, double n0);

struct WindowDivergence {
  double exact_sum = 0.0;        // sum over uses of kl_gaussian(rho_u)
  double quadratic_bound = 0.0;  // l rho_max^2 / (2 N0^2)
};

WindowDivergence kl_window_upper(std::span<const double> rho_per_use, double n0);

/// Per-warden KL budget over a window of l channel uses.
struct CovertnessBudget {
  double delta = 0.1;
  double l = 1.0;
  double n0 = 1.0;

  /// Peak per-use power that guarantees the budget: sqrt(2) N0 sqrt(delta/l).
  double rho_max_sufficient() const;
  /// Mean per-use power any covert scheme must respect, leading order only.
  double rho_bar_necessary() const;
};

struct CovertnessVerdict {
  bool sufficient_ok = true;
  bool necessary_ok = true;
  bool exact_kl_ok = true;
  std::vector<double> exact_kl;   // per warden, window divergence
  std::vector<bool> warden_ok;    // per warden, exact_kl <= delta
};

/// Verdicts from explicit per-warden, per-use received powers.
CovertnessVerdict covertness_check(std::span<const std::vector<double>> powers_at_wardens,
                                   const CovertnessBudget& budget);

/// Verdicts when every use in the window carries the same per-warden power,
/// as within one slot. Equivalent to covertness_check with l identical uses.
CovertnessVerdict covertness_check_constant(std::span<const double> power_at_wardens,
                                            const CovertnessBudget& budget);

struct PinskerGap {
  double tv = 0.0;
  double sqrt_kl = 0.0;
};

/// Total variation between CN(0, N0 + rho) and CN(0, N0) in closed form, via
/// the exponential laws of |Z|^2 and their density crossing point.
double tv_gaussian(double rho, double n0);

PinskerGap pinsker_gap(double rho, double n0);

}  // namespace covertnet
