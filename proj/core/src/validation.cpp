#include "covertnet/validation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "covertnet/channel.hpp"
#include "covertnet/errors.hpp"
#include "covertnet/geometry.hpp"
#include "covertnet/parallel.hpp"
#include "covertnet/rng.hpp"
#include "covertnet/stats.hpp"
#include "covertnet/theory.hpp"
#include "covertnet/twohop.hpp"

namespace covertnet {

DistanceLawReport distance_law_ks(const NetworkConfig& base, std::int64_t n, int slots, int workers) {
  NetworkConfig c = base;
  c.n = n;
  c.seed = derive_seed(base.seed, static_cast<std::uint64_t>(n));
  c.validate();

  std::vector<NearestDistances> per_slot(static_cast<std::size_t>(slots));
  parallel_for(per_slot.size(), workers, [&](std::size_t i) {
    const std::uint64_t slot = i + 1;
    const Placement placement = sample_placement(c, slot);
    Stream roles(derive_seed(c.seed, StreamTag::kRoles, slot));
    const PairAssignment a = assign_pairs(placement, c.theta, c.centric, c.preservation_radius(), roles);
    per_slot[i] = nearest_distances(placement, a);
  });

  std::vector<double> pair, receiver, node;
  for (const auto& d : per_slot) {
    pair.insert(pair.end(), d.pair_dist.begin(), d.pair_dist.end());
    receiver.insert(receiver.end(), d.rcv_nearest_sender.begin(), d.rcv_nearest_sender.end());
    node.insert(node.end(), d.node_nearest_node.begin(), d.node_nearest_node.end());
  }
  const double nd = static_cast<double>(n);
  auto law = [](double density) {
    return [density](double z) { return stats::nearest_point_cdf(z, density); };
  };
  return {n, stats::ks_statistic(std::move(pair), law(nd * (1.0 - c.theta))),
          stats::ks_statistic(std::move(receiver), law(nd * c.theta)),
          stats::ks_statistic(std::move(node), law(nd))};
}

std::vector<RingRatio> ring_ratios(const NetworkConfig& base, const std::vector<std::int64_t>& grid,
                                   int trials, int workers, double lo_q, double hi_q) {
  const std::size_t t = static_cast<std::size_t>(trials);
  std::vector<double> ratio(grid.size() * t);
  parallel_for(ratio.size(), workers, [&](std::size_t job) {
    NetworkConfig c = base;
    c.n = grid[job / t];
    c.seed = derive_seed(base.seed, StreamTag::kTrial, static_cast<std::uint64_t>(c.n), job % t);
    SimulationOptions options;
    options.power = 1.0;
    options.compute_rates = false;
    const SimulationResult sim = simulate(c, 1, options);
    const double ring_form = static_cast<double>(c.n) * std::pow(c.preservation_radius(), 2.0 - c.alpha);
    ratio[job] = sim.slots.front().max_warden_power / ring_form;
  });

  std::vector<RingRatio> out;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    std::vector<double> sample(ratio.begin() + static_cast<std::ptrdiff_t>(gi * t),
                               ratio.begin() + static_cast<std::ptrdiff_t>((gi + 1) * t));
    out.push_back({grid[gi], stats::quantile(sample, lo_q), stats::quantile(sample, hi_q)});
  }
  return out;
}

double tv_gaussian_quadrature(double rho, double n0) {
  if (!(rho >= 0.0)) throw DomainError("tv_gaussian_quadrature: negative power");
  if (rho == 0.0) return 0.0;
  const double a = n0 + rho;
  const double b = n0;
  // TV = 1/2 int_C |p_a - p_b| = int_0^inf r |e^{-r^2/a}/a - e^{-r^2/b}/b| dr.
  auto diff = [&](double r) { return std::exp(-r * r / a) / a - std::exp(-r * r / b) / b; };
  const double r_max = 8.0 * std::sqrt(a);

  double lo = 0.0, hi = r_max;  // diff(lo) < 0 < diff(hi)
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  const double crossing = 0.5 * (lo + hi);

  auto simpson = [&](double x0, double x1, int intervals) {
    const double h = (x1 - x0) / intervals;
    double sum = 0.0;
    for (int i = 0; i <= intervals; ++i) {
      const double x = x0 + h * i;
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * x * std::abs(diff(x));
    }
    return sum * h / 3.0;
  };
  return simpson(0.0, crossing, 4000) + simpson(crossing, r_max, 8000);
}

CheckResult check_distance_laws(const NetworkConfig& base, const std::vector<std::int64_t>& ns,
                                int slots, double ks_limit, int workers) {
  CheckResult r{"distance_laws", true, ""};
  for (std::int64_t n : ns) {
    const DistanceLawReport rep = distance_law_ks(base, n, slots, workers);
    const bool ok = rep.ks_pair < ks_limit && rep.ks_receiver < ks_limit && rep.ks_node < ks_limit;
    r.passed = r.passed && ok;
    r.detail += fmt::format("n={} ks_pair={:.4f} ks_receiver={:.4f} ks_node={:.4f} (limit {}); ", n,
                            rep.ks_pair, rep.ks_receiver, rep.ks_node, ks_limit);
  }
  return r;
}

CheckResult check_log_sandwich(int points) {
  CheckResult r{"log_sandwich", true, ""};
  int violations = 0;
  for (int i = 1; i <= points; ++i) {
    const double x = 10.0 * i / points;
    const double d = kl_gaussian(x, 1.0);
    if (!(x * x / 2.0 - x * x * x / 3.0 <= d && d <= x * x / 2.0)) ++violations;
  }
  r.passed = violations == 0;
  r.detail = fmt::format("{} grid points in (0, 10], {} violations", points, violations);
  return r;
}

CheckResult check_pinsker(int points) {
  CheckResult r{"pinsker", true, ""};
  int violations = 0;
  double worst_rel = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = std::pow(10.0, -6.0 + 7.0 * i / (points - 1));
    const PinskerGap gap = pinsker_gap(x, 1.0);
    const double oracle = tv_gaussian_quadrature(x, 1.0);
    worst_rel = std::max(worst_rel, std::abs(gap.tv - oracle) / oracle);
    if (!(gap.tv <= gap.sqrt_kl) || !(oracle <= gap.sqrt_kl)) ++violations;
  }
  r.passed = violations == 0 && worst_rel < 1e-6;
  r.detail = fmt::format("{} log-grid points in [1e-6, 10], {} violations, closed form vs quadrature "
                         "max rel error {:.3g}",
                         points, violations, worst_rel);
  return r;
}

CheckResult check_window_chain(int windows, std::uint64_t seed) {
  CheckResult r{"window_chain", true, ""};
  Stream stream(seed);
  int violations = 0;
  for (int w = 0; w < windows; ++w) {
    const auto len = static_cast<std::size_t>(1 + stream.below(64));
    std::vector<double> rho(len);
    for (double& v : rho) v = std::pow(10.0, -4.0 + 5.0 * stream.uniform());
    const WindowDivergence d = kl_window_upper(rho, 1.0);
    double mean = 0.0;
    for (double v : rho) mean += v;
    mean /= static_cast<double>(len);
    const double convex = static_cast<double>(len) * kl_gaussian(mean, 1.0);
    if (!(d.exact_sum <= d.quadratic_bound) || !(convex <= d.exact_sum * (1.0 + 1e-12))) ++violations;
  }
  r.passed = violations == 0;
  r.detail = fmt::format("{} random windows, {} violations", windows, violations);
  return r;
}

CheckResult check_ring_sandwich(const NetworkConfig& base, const std::vector<std::int64_t>& grid,
                                int trials, int workers) {
  CheckResult r{"ring_sandwich", true, ""};
  if (!(base.s < 1.0)) {
    r.detail = "not applicable for s >= 1";
    return r;
  }
  const std::vector<RingRatio> ratios = ring_ratios(base, grid, trials, workers);
  std::vector<double> lo, hi;
  for (const auto& k : ratios) {
    lo.push_back(k.k_lo);
    hi.push_back(k.k_hi);
  }
  const double lo_ref = stats::median(lo);
  const double hi_ref = stats::median(hi);
  for (const auto& k : ratios) {
    const bool ok = k.k_lo <= k.k_hi && std::abs(k.k_lo / lo_ref - 1.0) <= 0.5 &&
                    std::abs(k.k_hi / hi_ref - 1.0) <= 0.5;
    r.passed = r.passed && ok;
    r.detail += fmt::format("n={} K_lo={:.4g} K_hi={:.4g}; ", k.n, k.k_lo, k.k_hi);
  }
  return r;
}

CheckResult check_theory_oracles() {
  using namespace theory;
  CheckResult r{"theory_oracles", true, ""};
  int violations = 0;
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
      for (double eps : {0.0, 0.02}) {
        const double below = achievable_sparse({alpha, 1.0 - 1e-12, lambda, eps}).exponent;
        const double at = achievable_dense({alpha, 1.0, lambda, eps}).exponent;
        if (std::abs(below - at) > 1e-9) ++violations;
        for (double s : {0.1, 0.5, 0.9, 1.0, 1.5, 3.0}) {
          const RegimeParams p{alpha, s, lambda, eps};
          const UpperExponents up = upper_exponents(p);
          const double ach = achievable(p).exponent;
          if (ach > up.trivial.exponent || ach > up.converse.exponent) ++violations;
        }
      }
    }
  }
  r.passed = violations == 0;
  r.detail = fmt::format("continuity and ordering grid, {} violations", violations);
  return r;
}

std::vector<CheckResult> run_validation(const NetworkConfig& base, const ValidationOptions& options) {
  std::vector<CheckResult> out;
  if (options.quick) {
    out.push_back(check_distance_laws(base, {1000}, 50, 0.05, options.workers));
    out.push_back(check_log_sandwich(10000));
    out.push_back(check_pinsker(100));
    out.push_back(check_window_chain(1000, base.seed));
    out.push_back(check_ring_sandwich(base, {256, 512, 1024, 2048}, 20, options.workers));
  } else {
    out.push_back(check_distance_laws(base, {1000, 4000}, 200, 0.05, options.workers));
    out.push_back(check_log_sandwich(10000));
    out.push_back(check_pinsker(400));
    out.push_back(check_window_chain(1000, base.seed));
    out.push_back(check_ring_sandwich(base, std::vector<std::int64_t>{256, 512, 1024, 2048, 4096, 8192}, 50, options.workers));
  }
  out.push_back(check_theory_oracles());
  return out;
}

}  // namespace covertnet
