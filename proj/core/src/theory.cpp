#include "covertnet/theory.hpp"

#include <algorithm>
#include <cmath>

#include "covertnet/errors.hpp"

namespace covertnet::theory {

void RegimeParams::validate() const {
  if (!(alpha > 2.0)) throw DomainError("alpha must exceed 2");
  if (!(s > 0.0)) throw DomainError("s must be positive");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (!(eps >= 0.0)) throw DomainError("eps must be non-negative");
}

namespace {

// Exponent of (n^{(1/2 - s/2)(alpha-2)} / sqrt(l))^{2/alpha}.
double sparse_inner(const RegimeParams& p) {
  return (2.0 / p.alpha) * ((0.5 - p.s / 2.0) * (p.alpha - 2.0) - p.lambda / 2.0);
}

}  // namespace

ExponentResult achievable_sparse(const RegimeParams& p) {
  p.validate();
  if (!(p.s < 1.0)) throw DomainError("sparse-warden law requires 0 < s < 1");
  const double inner = sparse_inner(p);
  return {1.0 - p.eps + std::min(inner, 0.0), Regime::kAchievableSparse,
          inner >= 0.0 ? Branch::kSaturated : Branch::kPowerLimited};
}

ExponentResult achievable_dense(const RegimeParams& p) {
  p.validate();
  if (!(p.s >= 1.0)) throw DomainError("dense-warden law requires s >= 1");
  const double inner = (2.0 / p.alpha) * (p.alpha * (0.5 - p.s / 2.0) - p.lambda / 2.0);
  return {1.0 - p.eps + inner, Regime::kAchievableDense,
          inner >= 0.0 ? Branch::kSaturated : Branch::kPowerLimited};
}

ExponentResult achievable(const RegimeParams& p) {
  return p.s < 1.0 ? achievable_sparse(p) : achievable_dense(p);
}

UpperExponents upper_exponents(const RegimeParams& p) {
  p.validate();
  UpperExponents out;
  out.trivial = {1.0 + p.eps, Regime::kTrivialUpper, Branch::kSaturated};
  if (p.s < 1.0) {
    const double inner = sparse_inner(p);
    out.converse = {1.0 + p.eps + std::min(inner, 0.0), Regime::kConverseSparse,
                    inner >= 0.0 ? Branch::kSaturated : Branch::kPowerLimited};
  } else {
    out.converse = {1.0 + p.eps - p.lambda / p.alpha, Regime::kConverseDense,
                    p.lambda == 0.0 ? Branch::kSaturated : Branch::kPowerLimited};
  }
  return out;
}

WardenPowerExponent warden_power_exponent(double alpha, double s, double eps_p,
                                          double ptx_exponent) {
  if (!(alpha > 2.0)) throw DomainError("alpha must exceed 2");
  if (!(s >= 0.0)) throw DomainError("s must be non-negative");
  if (s == 0.0) return {ptx_exponent + 1.0, 0.0};
  const double rp_exponent = s / 2.0 + eps_p;  // r_p ~ n^{-rp_exponent}
  if (s < 1.0) return {ptx_exponent + 1.0 + rp_exponent * (alpha - 2.0), 0.0};
  return {ptx_exponent + alpha * rp_exponent, 2.0};
}

double sparse_power_exponent(double alpha, double s, double lambda, double eps_tx) {
  return -lambda / 2.0 - (s / 2.0 * (alpha - 2.0) + 1.0) - eps_tx;
}

double dense_power_exponent(double alpha, double s, double lambda, double eps_tx) {
  return -lambda / 2.0 - s * alpha / 2.0 - eps_tx;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kAchievableSparse: return "achievable_sparse";
    case Regime::kAchievableDense: return "achievable_dense";
    case Regime::kTrivialUpper: return "upper_trivial";
    case Regime::kConverseSparse: return "converse_sparse";
    case Regime::kConverseDense: return "converse_dense";
  }
  return "unknown";
}

std::string_view to_string(Branch b) {
  return b == Branch::kSaturated ? "saturated" : "power_limited";
}

}  // namespace covertnet::theory
