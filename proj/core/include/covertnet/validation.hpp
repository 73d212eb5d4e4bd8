#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covertnet/config.hpp"

namespace covertnet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// KS distances of the three nearest-neighbour laws at one n.
struct DistanceLawReport {
  std::int64_t n = 0;
  double ks_pair = 0.0;       // sender -> nearest receiver, density n(1 - theta)
  double ks_receiver = 0.0;   // receiver -> nearest sender, density n theta
  double ks_node = 0.0;       // node -> nearest node, density n
};

DistanceLawReport distance_law_ks(const NetworkConfig& base, std::int64_t n, int slots, int workers);

/// Per-n quantiles of max warden power / (P n r_p^{2 - alpha}) at constant P.
struct RingRatio {
  std::int64_t n = 0;
  double k_lo = 0.0;
  double k_hi = 0.0;
};

std::vector<RingRatio> ring_ratios(const NetworkConfig& base, const std::vector<std::int64_t>& grid,
                                   int trials, int workers, double lo_q = 0.1, double hi_q = 0.9);

/// Total variation between CN(0, N0 + rho) and CN(0, N0) by radial quadrature
/// of the two circular densities; independent of the closed form.
double tv_gaussian_quadrature(double rho, double n0);

CheckResult check_distance_laws(const NetworkConfig& base, const std::vector<std::int64_t>& ns,
                                int slots, double ks_limit, int workers);
CheckResult check_log_sandwich(int points);
CheckResult check_pinsker(int points);
CheckResult check_window_chain(int windows, std::uint64_t seed);
CheckResult check_ring_sandwich(const NetworkConfig& base, const std::vector<std::int64_t>& grid,
                                int trials, int workers);
CheckResult check_theory_oracles();

struct ValidationOptions {
  bool quick = false;
  int workers = 1;
};

/// The invariant suites behind `covertnet validate`.
std::vector<CheckResult> run_validation(const NetworkConfig& base, const ValidationOptions& options);

}  // namespace covertnet
