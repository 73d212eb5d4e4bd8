#include "covertnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covertnet/errors.hpp"

namespace covertnet {

void ChannelParams::validate() const {
  if (!(alpha > 2.0)) throw ConfigError("alpha must exceed 2");
  if (!(gain > 0.0)) throw ConfigError("G must be positive");
  if (!(n0 > 0.0)) throw ConfigError("N0 must be positive");
}

double path_gain_sq(double dist_sq, const ChannelParams& params) {
  if (!(dist_sq >= kMinSeparation * kMinSeparation)) {
    throw SingularityError("transmitter within minimum separation of a receiving point");
  }
  if (params.alpha == 4.0) return params.gain / (dist_sq * dist_sq);
  if (params.alpha == 3.0) return params.gain / (dist_sq * std::sqrt(dist_sq));
  return params.gain * std::pow(dist_sq, -0.5 * params.alpha);
}

double received_power(std::span<const double> tx_powers, std::span<const double> distances,
                      const ChannelParams& params) {
  if (tx_powers.size() != distances.size()) {
    throw DomainError("received_power: power and distance lists differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < tx_powers.size(); ++i) {
    if (tx_powers[i] == 0.0) continue;
    total += tx_powers[i] * path_gain_sq(distances[i] * distances[i], params);
  }
  return total;
}

double kl_gaussian(double rho, double n0) {
  if (!(rho >= 0.0)) throw DomainError("kl_gaussian: received power must be non-negative");
  if (!(n0 > 0.0)) throw DomainError("kl_gaussian: N0 must be positive");
  const double x = rho / n0;
  // x - log1p(x) cancels catastrophically for small x; use the series.
  if (x < 1e-3) {
    return x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x / 6.0))));
  }
  return x - std::log1p(x);
}

WindowDivergence kl_window_upper(std::span<const double> rho_per_use, double n0) {
  if (rho_per_use.empty()) throw DomainError("kl_window_upper: empty window");
  WindowDivergence out;
  double peak = 0.0;
  for (double rho : rho_per_use) {
    out.exact_sum += kl_gaussian(rho, n0);
    peak = std::max(peak, rho);
  }
  out.quadratic_bound =
      static_cast<double>(rho_per_use.size()) * peak * peak / (2.0 * n0 * n0);
  return out;
}

double CovertnessBudget::rho_max_sufficient() const {
  return std::sqrt(2.0) * n0 * std::sqrt(delta / l);
}

double CovertnessBudget::rho_bar_necessary() const {
  return std::sqrt(2.0) * n0 * std::sqrt(delta / l);
}

CovertnessVerdict covertness_check(std::span<const std::vector<double>> powers_at_wardens,
                                   const CovertnessBudget& budget) {
  CovertnessVerdict v;
  const double peak_limit = budget.rho_max_sufficient();
  const double mean_limit = budget.rho_bar_necessary();
  for (const auto& uses : powers_at_wardens) {
    if (uses.empty()) throw DomainError("covertness_check: empty window");
    const double peak = *std::max_element(uses.begin(), uses.end());
    const double mean =
        std::accumulate(uses.begin(), uses.end(), 0.0) / static_cast<double>(uses.size());
    double kl = 0.0;
    for (double rho : uses) kl += kl_gaussian(rho, budget.n0);
    v.sufficient_ok = v.sufficient_ok && peak <= peak_limit;
    v.necessary_ok = v.necessary_ok && mean <= mean_limit;
    v.exact_kl.push_back(kl);
    v.warden_ok.push_back(kl <= budget.delta);
    v.exact_kl_ok = v.exact_kl_ok && kl <= budget.delta;
  }
  return v;
}

CovertnessVerdict covertness_check_constant(std::span<const double> power_at_wardens,
                                            const CovertnessBudget& budget) {
  CovertnessVerdict v;
  const double limit = budget.rho_max_sufficient();
  const double bar_limit = budget.rho_bar_necessary();
  v.exact_kl.reserve(power_at_wardens.size());
  v.warden_ok.reserve(power_at_wardens.size());
  for (double rho : power_at_wardens) {
    const double kl = budget.l * kl_gaussian(rho, budget.n0);
    v.sufficient_ok = v.sufficient_ok && rho <= limit;
    v.necessary_ok = v.necessary_ok && rho <= bar_limit;
    v.exact_kl.push_back(kl);
    v.warden_ok.push_back(kl <= budget.delta);
    v.exact_kl_ok = v.exact_kl_ok && kl <= budget.delta;
  }
  return v;
}

double tv_gaussian(double rho, double n0) {
  if (!(rho >= 0.0)) throw DomainError("tv_gaussian: received power must be non-negative");
  if (rho == 0.0) return 0.0;
  // |Z|^2 is exponential with mean a (signal present) or b (noise only).
  // The densities cross once, at t*; below it the noise density is larger.
  const double a = n0 + rho;
  const double b = n0;
  const double x = rho / n0;
  const double t_star = b * (1.0 + x) * std::log1p(x) / x;
  // exp(-t*/a) - exp(-t*/b), written to keep precision for small x.
  const double ea = -t_star / a;
  const double eb = -t_star / b;
  return std::exp(ea) * -std::expm1(eb - ea);
}

PinskerGap pinsker_gap(double rho, double n0) {
  return {tv_gaussian(rho, n0), std::sqrt(kl_gaussian(rho, n0))};
}

}  // namespace covertnet
