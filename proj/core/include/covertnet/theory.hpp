#pragma once

#include <string_view>

namespace covertnet::theory {

/// Scaling regime in exponent space: l = n^lambda.
struct RegimeParams {
  double alpha = 4.0;
  double s = 0.5;
  double lambda = 0.0;
  double eps = 0.0;

  /// Throws DomainError unless alpha > 2, s > 0, lambda >= 0, eps >= 0.
  void validate() const;
};

enum class Regime { kAchievableSparse, kAchievableDense, kTrivialUpper, kConverseSparse, kConverseDense };

/// Whether the min(., 1) in the sparse-warden law is at its cap.
enum class Branch { kSaturated, kPowerLimited };

struct ExponentResult {
  double exponent = 0.0;  // T(n) = Theta(n^exponent)
  Regime regime = Regime::kAchievableSparse;
  Branch branch = Branch::kSaturated;
};

/// Achievable throughput exponent for 0 < s < 1:
/// 1 - eps + min((2/alpha) ((1/2 - s/2)(alpha - 2) - lambda/2), 0).
ExponentResult achievable_sparse(const RegimeParams& p);

/// Achievable throughput exponent for s >= 1:
/// 1 - eps + (2/alpha) (alpha (1/2 - s/2) - lambda/2). No cap.
ExponentResult achievable_dense(const RegimeParams& p);

/// Dispatches on s.
ExponentResult achievable(const RegimeParams& p);

struct UpperExponents {
  ExponentResult trivial;    // 1 + eps, no covertness constraint
  ExponentResult converse;   // equal-power converse for the regime of s
};

UpperExponents upper_exponents(const RegimeParams& p);

struct WardenPowerExponent {
  double slope = 0.0;      // polynomial exponent of n
  double log_power = 0.0;  // extra (log n)^log_power factor, reported only
};

/// Predicted log-log slope of the maximum warden received power against n when
/// the transmit power scales as n^ptx_exponent. For s < 1 this is the ring form
/// n r_p^{2-alpha}; for s >= 1 the innermost-ring form (log n)^2 r_p^{-alpha}.
/// s = 0 is accepted as the limit with r_p constant.
WardenPowerExponent warden_power_exponent(double alpha, double s, double eps_p,
                                          double ptx_exponent);

/// Exponent of n in the formula transmit powers (coefficient excluded).
double sparse_power_exponent(double alpha, double s, double lambda, double eps_tx);
double dense_power_exponent(double alpha, double s, double lambda, double eps_tx);

std::string_view to_string(Regime r);
std::string_view to_string(Branch b);

}  // namespace covertnet::theory
