#include "cli.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "covertnet/config.hpp"
#include "covertnet/emit.hpp"
#include "covertnet/errors.hpp"
#include "covertnet/sweep.hpp"
#include "covertnet/theory.hpp"
#include "covertnet/twohop.hpp"
#include "covertnet/validation.hpp"

namespace covertnet {

namespace {

// Flags shared by every network-level subcommand. They live on the root app so
// a flat key=value config file can supply them.
struct NetworkFlags {
  NetworkConfig config;
  double lambda = 0.0;
  CLI::Option* lambda_opt = nullptr;
  std::string centric = "sender";
  std::string power_rule = "calibrated";
  std::string mode = "fluid";
  int workers = 1;

  void attach(CLI::App& app) {
    auto& c = config;
    app.add_option("--n", c.n, "node count")->capture_default_str();
    app.add_option("--s", c.s, "warden exponent, n_w = c_w n^s")->capture_default_str();
    app.add_option("--alpha", c.alpha, "path-loss exponent")->capture_default_str();
    app.add_option("--theta", c.theta, "sender fraction")->capture_default_str();
    app.add_option("--delta", c.delta, "KL budget per warden")->capture_default_str();
    app.add_option("--l", c.l, "warden window length")->capture_default_str();
    lambda_opt = app.add_option("--lambda", lambda, "window exponent, l = n^lambda (overrides --l)");
    app.add_option("--n0", c.n0, "noise power")->capture_default_str();
    app.add_option("--gain", c.gain, "channel gain G")->capture_default_str();
    app.add_option("--p-max", c.p_max, "per-node power cap")->capture_default_str();
    app.add_option("--c-w", c.c_w, "warden count coefficient")->capture_default_str();
    app.add_option("--c-p", c.c_p, "preservation radius coefficient")->capture_default_str();
    app.add_option("--eps-p", c.eps_p, "preservation radius slack exponent")->capture_default_str();
    app.add_option("--eps-tx", c.eps_tx, "formula power slack exponent")->capture_default_str();
    app.add_option("--c-tx", c.c_tx, "formula / constant power coefficient")->capture_default_str();
    app.add_option("--warden-mobile", c.warden_mobile, "redraw wardens every slot")->capture_default_str();
    app.add_option("--centric", centric, "pairing rule")
        ->check(CLI::IsMember({"sender", "receiver"}))
        ->capture_default_str();
    app.add_option("--power-rule", power_rule, "transmit power rule")
        ->check(CLI::IsMember({"sparse", "dense", "calibrated", "constant"}))
        ->capture_default_str();
    app.add_option("--mode", mode, "throughput ledger")
        ->check(CLI::IsMember({"fluid", "packet"}))
        ->capture_default_str();
    app.add_option("--seed", c.seed, "master seed")->capture_default_str();
    app.add_option("--packet-nats", c.packet_nats, "packet size (packet ledger)")->capture_default_str();
    app.add_option("--queue-capacity", c.queue_capacity, "relay queue capacity in packets")
        ->capture_default_str();
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }

  NetworkConfig resolve() const {
    NetworkConfig c = config;
    if (lambda_opt->count() > 0) c.lambda = lambda;
    c.centric = parse_centric(centric);
    c.power_rule = parse_power_rule(power_rule);
    c.mode = parse_ledger_mode(mode);
    c.validate();
    return c;
  }
};

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw EmitError("cannot open " + path + " for writing");
  file << text;
  if (!file.flush()) throw EmitError("failed writing " + path);
}

int cmd_theory(const std::vector<double>& alphas, const std::vector<double>& ss,
               const std::vector<double>& lambdas, const std::vector<double>& epss, std::ostream& out) {
  out << "alpha,s,lambda,eps,exponent,regime,branch,trivial_upper,converse_upper,converse_regime\n";
  for (double alpha : alphas) {
    for (double s : ss) {
      for (double lambda : lambdas) {
        for (double eps : epss) {
          const theory::RegimeParams p{alpha, s, lambda, eps};
          const theory::ExponentResult a = theory::achievable(p);
          const theory::UpperExponents up = theory::upper_exponents(p);
          out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", format_double(alpha), format_double(s),
                             format_double(lambda), format_double(eps), format_double(a.exponent),
                             theory::to_string(a.regime), theory::to_string(a.branch),
                             format_double(up.trivial.exponent), format_double(up.converse.exponent),
                             theory::to_string(up.converse.regime));
        }
      }
    }
  }
  return kExitOk;
}

int cmd_calibrate(const NetworkConfig& config, int workers, std::ostream& out) {
  CalibrationOptions options;
  options.workers = workers;
  const CalibrationReport r = calibrate_power(config, options);
  out << fmt::format("power          {}\n", format_double(r.power));
  out << fmt::format("unit_pilot_max {}\n", format_double(r.unit_pilot_max));
  out << fmt::format("threshold      {}\n", format_double(r.threshold));
  out << fmt::format("target         {}\n", format_double(r.target));
  out << fmt::format("grid_step      {}\n", r.grid_step);
  out << fmt::format("at_grid_top    {}\n", r.at_grid_top);
  out << fmt::format("formula_rule   {}\n", to_string(r.formula_rule));
  out << fmt::format("implied_c_tx   {}\n", format_double(r.implied_c_tx));
  return kExitOk;
}

int cmd_validate(const NetworkConfig& config, bool quick, int workers, std::ostream& out) {
  ValidationOptions options;
  options.quick = quick;
  options.workers = workers;
  bool all = true;
  for (const CheckResult& r : run_validation(config, options)) {
    out << fmt::format("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    all = all && r.passed;
  }
  return all ? kExitOk : kExitFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covert two-hop throughput simulator for mobile ad hoc networks with wardens", "covertnet"};
  app.set_config("--config", "", "flat key=value file supplying any flag; flags override it");
  app.require_subcommand(1);

  NetworkFlags net;
  net.attach(app);

  auto* theory_cmd = app.add_subcommand("theory", "print throughput exponent tables over an (alpha, s, lambda) grid");
  std::vector<double> t_alpha{4.0}, t_s{0.5}, t_lambda{0.0}, t_eps{0.0};
  theory_cmd->add_option("--alpha", t_alpha, "path-loss exponents")->capture_default_str();
  theory_cmd->add_option("--s", t_s, "warden exponents")->capture_default_str();
  theory_cmd->add_option("--lambda", t_lambda, "window exponents")->capture_default_str();
  theory_cmd->add_option("--eps", t_eps, "slack exponents")->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "run one configuration and dump per-slot metrics");
  std::int64_t sim_slots = 10, sim_warmup = 0;
  std::string sim_format = "csv", sim_output;
  sim_cmd->add_option("--slots", sim_slots, "slots to simulate")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--warmup", sim_warmup, "slots before throughput measurement starts")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim_cmd->add_option("--format", sim_format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sim_cmd->add_option("--output,-o", sim_output, "output file (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "seeded n-grid sweep with log-log fits");
  std::vector<std::int64_t> grid = SweepSpec::geometric_grid(256, 8192);
  int slots_per_n = 1, trials_per_n = 10;
  double margin = 0.1;
  std::vector<std::string> metric_names{"warden_power"};
  std::string sweep_format = "csv", sweep_output;
  sweep_cmd->add_option("--grid", grid, "strictly increasing node counts")->capture_default_str();
  sweep_cmd->add_option("--slots-per-n", slots_per_n, "slots per trial")->capture_default_str();
  sweep_cmd->add_option("--trials", trials_per_n, "trials per grid point")->capture_default_str();
  sweep_cmd->add_option("--metric", metric_names, "metrics to record")
      ->check(CLI::IsMember({"warden_power", "pair_distance_ks", "interference", "throughput", "covert_verdicts"}))
      ->capture_default_str();
  sweep_cmd->add_option("--interference-margin", margin, "exponent margin of the interference test")
      ->capture_default_str();
  sweep_cmd->add_option("--format", sweep_format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep_cmd->add_option("--output,-o", sweep_output, "output file (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "run the invariant suites");
  bool quick = false;
  validate_cmd->add_flag("--quick", quick, "smaller sample sizes");

  auto* calibrate_cmd = app.add_subcommand("calibrate", "report the pilot-batch power search");

  for (CLI::App* sub : {sim_cmd, sweep_cmd, validate_cmd, calibrate_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (theory_cmd->parsed()) return cmd_theory(t_alpha, t_s, t_lambda, t_eps, out);

    const NetworkConfig config = net.resolve();
    if (calibrate_cmd->parsed()) return cmd_calibrate(config, net.workers, out);
    if (validate_cmd->parsed()) return cmd_validate(config, quick, net.workers, out);

    if (sim_cmd->parsed()) {
      SimulationOptions options;
      options.workers = net.workers;
      options.warmup_slots = sim_warmup;
      options.calibration.workers = net.workers;
      const SimulationResult result = simulate(config, sim_slots, options);
      write_text(parse_format(sim_format) == Format::kCsv ? to_csv(result) : to_json(result, config),
                 sim_output, out);
      return kExitOk;
    }

    SweepSpec spec;
    spec.n_grid = grid;
    spec.slots_per_n = slots_per_n;
    spec.trials_per_n = trials_per_n;
    spec.interference_margin = margin;
    spec.workers = net.workers;
    spec.metrics.clear();
    for (const std::string& m : metric_names) spec.metrics.insert(parse_metric(m));
    const SweepResult result = run_sweep(spec, config);
    write_text(parse_format(sweep_format) == Format::kCsv ? to_csv(result) : to_json(result), sweep_output, out);
    for (const ScalingFit& f : result.fits) {
      err << fmt::format("fit {}: slope {} predicted {} r2 {}{}\n", f.metric, format_double(f.slope),
                         format_double(f.predicted_slope), format_double(f.r_squared),
                         f.flagged ? " [low r2]" : "");
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace covertnet
