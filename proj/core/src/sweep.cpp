#include "covertnet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "covertnet/errors.hpp"
#include "covertnet/parallel.hpp"
#include "covertnet/rng.hpp"
#include "covertnet/stats.hpp"
#include "covertnet/theory.hpp"

namespace covertnet {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kWardenPower: return "warden_power";
    case Metric::kPairDistanceKs: return "pair_distance_ks";
    case Metric::kInterference: return "interference";
    case Metric::kThroughput: return "throughput";
    case Metric::kCovertVerdicts: return "covert_verdicts";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::kWardenPower, Metric::kPairDistanceKs, Metric::kInterference,
                   Metric::kThroughput, Metric::kCovertVerdicts}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown metric: " + std::string(text));
}

void SweepSpec::validate() const {
  if (n_grid.size() < 4) throw ConfigError("n grid needs at least four points for regression");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n grid must be strictly increasing");
  }
  if (slots_per_n < 1 || trials_per_n < 1) throw ConfigError("slots and trials must be positive");
  if (metrics.empty()) throw ConfigError("no metrics requested");
}

std::vector<std::int64_t> SweepSpec::geometric_grid(std::int64_t lo, std::int64_t hi,
                                                    std::int64_t ratio) {
  if (lo < 2 || hi < lo || ratio < 2) throw ConfigError("invalid geometric grid bounds");
  std::vector<std::int64_t> grid;
  for (std::int64_t n = lo; n <= hi; n *= ratio) grid.push_back(n);
  return grid;
}

std::optional<double> predicted_slope(Metric metric, const NetworkConfig& base) {
  const double lambda = base.lambda.value_or(0.0);
  if (metric == Metric::kThroughput) {
    return theory::achievable({base.alpha, base.s, lambda, 0.0}).exponent;
  }
  if (metric == Metric::kWardenPower) {
    double ptx = 0.0;
    switch (base.power_rule) {
      case PowerRule::kConstant: ptx = 0.0; break;
      case PowerRule::kSparseFormula:
        ptx = theory::sparse_power_exponent(base.alpha, base.s, lambda, base.eps_tx);
        break;
      case PowerRule::kDenseFormula:
        ptx = theory::dense_power_exponent(base.alpha, base.s, lambda, base.eps_tx);
        break;
      case PowerRule::kCalibrated:
        // The calibrated power pins the peak warden power to the threshold.
        return -lambda / 2.0;
    }
    return theory::warden_power_exponent(base.alpha, base.s, base.eps_p, ptx).slope;
  }
  return std::nullopt;
}

namespace {

std::vector<double> trial_metrics(const NetworkConfig& config, const SweepSpec& spec,
                                  double p_tx, const std::vector<Metric>& metrics) {
  SimulationOptions options;
  options.workers = 1;
  options.power = p_tx;
  options.interference_margin = spec.interference_margin;
  options.compute_rates = spec.metrics.contains(Metric::kThroughput) ||
                          spec.metrics.contains(Metric::kInterference);
  options.keep_pair_distances = spec.metrics.contains(Metric::kPairDistanceKs);
  const SimulationResult sim = simulate(config, spec.slots_per_n, options);

  std::vector<double> values;
  for (Metric m : metrics) {
    switch (m) {
      case Metric::kWardenPower: {
        std::vector<double> peaks;
        for (const auto& s : sim.slots) peaks.push_back(s.max_warden_power);
        values.push_back(stats::median(std::move(peaks)));
        break;
      }
      case Metric::kPairDistanceKs: {
        std::vector<double> d;
        for (const auto& s : sim.slots) d.insert(d.end(), s.pair_distances.begin(), s.pair_distances.end());
        const double density = static_cast<double>(config.n) * (1.0 - config.theta);
        values.push_back(stats::ks_statistic(
            std::move(d), [density](double z) { return stats::nearest_point_cdf(z, density); }));
        break;
      }
      case Metric::kInterference: {
        double exceed = 0.0, pairs = 0.0;
        for (const auto& s : sim.slots) {
          exceed += static_cast<double>(s.interference_exceed);
          pairs += static_cast<double>(s.active_pairs);
        }
        values.push_back(pairs > 0.0 ? exceed / pairs : 0.0);
        break;
      }
      case Metric::kThroughput:
        values.push_back(sim.ledger.aggregate_delivered());
        break;
      case Metric::kCovertVerdicts: {
        double ok = 0.0;
        for (const auto& s : sim.slots) ok += s.sufficient_ok ? 1.0 : 0.0;
        values.push_back(ok / static_cast<double>(sim.slots.size()));
        break;
      }
    }
  }
  return values;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const NetworkConfig& base) {
  spec.validate();
  base.validate();

  SweepResult result;
  result.base = base;
  result.spec = spec;
  const std::vector<Metric> metrics(spec.metrics.begin(), spec.metrics.end());
  const std::size_t grid = spec.n_grid.size();
  const auto trials = static_cast<std::size_t>(spec.trials_per_n);

  auto config_for = [&](std::size_t gi) {
    NetworkConfig c = base;
    c.n = spec.n_grid[gi];
    c.seed = derive_seed(base.seed, static_cast<std::uint64_t>(c.n));
    c.validate();
    return c;
  };

  result.powers.assign(grid, 0.0);
  parallel_for(grid, spec.workers, [&](std::size_t gi) {
    CalibrationOptions calibration;
    result.powers[gi] = transmit_power(config_for(gi), calibration);
  });

  std::vector<std::vector<double>> values(grid * trials);
  std::vector<std::uint64_t> seeds(grid * trials);
  parallel_for(grid * trials, spec.workers, [&](std::size_t job) {
    const std::size_t gi = job / trials;
    const std::size_t trial = job % trials;
    NetworkConfig c = config_for(gi);
    c.seed = derive_seed(base.seed, StreamTag::kTrial, static_cast<std::uint64_t>(c.n), trial);
    seeds[job] = c.seed;
    values[job] = trial_metrics(c, spec, result.powers[gi], metrics);
  });

  for (std::size_t job = 0; job < values.size(); ++job) {
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      result.points.push_back({spec.n_grid[job / trials], static_cast<int>(job % trials),
                               seeds[job], metrics[k], values[job][k]});
    }
  }

  for (std::size_t k = 0; k < metrics.size(); ++k) {
    std::vector<double> ns, meds;
    for (std::size_t gi = 0; gi < grid; ++gi) {
      std::vector<double> sample;
      for (std::size_t t = 0; t < trials; ++t) sample.push_back(values[gi * trials + t][k]);
      const double med = stats::median(std::move(sample));
      result.medians.push_back({spec.n_grid[gi], metrics[k], med});
      ns.push_back(static_cast<double>(spec.n_grid[gi]));
      meds.push_back(med);
    }
    const auto predicted = predicted_slope(metrics[k], base);
    if (!predicted) continue;
    const stats::LineFit line = stats::loglog_fit(ns, meds);
    ScalingFit fit;
    fit.metric = std::string(to_string(metrics[k]));
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    fit.residuals = line.residuals;
    fit.predicted_slope = *predicted;
    fit.abs_error = std::abs(fit.slope - fit.predicted_slope);
    fit.flagged = fit.r_squared < kMinFitRSquared;
    result.fits.push_back(std::move(fit));
  }
  std::sort(result.medians.begin(), result.medians.end(), [](const GridSummary& a, const GridSummary& b) {
    return a.n != b.n ? a.n < b.n : a.metric < b.metric;
  });
  return result;
}

}  // namespace covertnet
