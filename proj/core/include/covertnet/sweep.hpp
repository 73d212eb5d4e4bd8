#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/twohop.hpp"

namespace covertnet {

enum class Metric { kWardenPower, kPairDistanceKs, kInterference, kThroughput, kCovertVerdicts };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view text);

struct SweepSpec {
  std::vector<std::int64_t> n_grid;
  int slots_per_n = 1;
  int trials_per_n = 10;
  std::set<Metric> metrics = {Metric::kWardenPower};
  int workers = 1;
  double interference_margin = 0.1;

  /// Grid strictly increasing with at least four points; counts positive.
  void validate() const;

  /// lo, lo*ratio, ... up to and including hi.
  static std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi,
                                                  std::int64_t ratio = 2);
};

struct SweepPoint {
  std::int64_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Metric metric = Metric::kWardenPower;
  double value = 0.0;
};

struct GridSummary {
  std::int64_t n = 0;
  Metric metric = Metric::kWardenPower;
  double median = 0.0;
};

/// Log-log slope of a per-n median metric against its predicted exponent.
struct ScalingFit {
  std::string metric;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;
  double abs_error = 0.0;
  std::vector<double> residuals;
  bool flagged = false;  // r^2 below kMinFitRSquared
};

inline constexpr double kMinFitRSquared = 0.9;

struct SweepResult {
  NetworkConfig base;
  SweepSpec spec;
  std::vector<double> powers;          // transmit power per grid point
  std::vector<SweepPoint> points;      // sorted by (n, trial, metric)
  std::vector<GridSummary> medians;    // sorted by (n, metric)
  std::vector<ScalingFit> fits;
};

/// Predicted slope for a fitted metric under `base` (nullopt for raw metrics).
std::optional<double> predicted_slope(Metric metric, const NetworkConfig& base);

/// Runs trials_per_n independent simulations for every grid point, takes
/// per-n medians and regresses the fit metrics on log n. Trial seeds come from
/// (base.seed, n, trial) so adding grid points or trials never changes the
/// existing ones, and results do not depend on spec.workers.
SweepResult run_sweep(const SweepSpec& spec, const NetworkConfig& base);

}  // namespace covertnet
