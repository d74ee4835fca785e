#include "cookiewalk/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cookiewalk/config.hpp"
#include "cookiewalk/experiments.hpp"
#include "cookiewalk/oracle.hpp"
#include "cookiewalk/walk.hpp"
#include "cookiewalk/zproc.hpp"

namespace cookiewalk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config_path;
  std::string out_dir = "results";
  std::string window;
  std::string table_path;
  std::optional<int> depth;
  std::optional<long> horizon;
  std::optional<long> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  long trace_start = 0;
  long trace_target = -1;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "Config file path");
  sub->add_option("--out", f.out_dir,
                  "Output base directory (default: results)");
  sub->add_option("--horizon", f.horizon, "Step budget per walk");
  sub->add_option("--replicas", f.replicas, "Monte Carlo replica count");
  sub->add_option("--seed", f.seed, "Master seed (default: 1)");
  sub->add_option("--threads", f.threads,
                  "Worker threads (default: machine parallelism)");
}

ConfigMap load_config(const Flags& f) {
  if (f.config_path.empty()) return {};
  return load_config_file(f.config_path);
}

ExperimentConfig effective_config(const Flags& f, const ConfigMap& cfg) {
  ExperimentConfig base;  // single_cookie(0.9), 200 x 100000, R 1000
  ExperimentConfig out = parse_experiment_config(cfg, base);
  if (f.horizon) out.horizon = *f.horizon;
  if (f.replicas) out.replicas = *f.replicas;
  if (f.seed) out.master_seed = *f.seed;
  if (f.threads) out.threads = *f.threads;
  return out;
}

fs::path prepare_out_dir(const Flags& f, const std::string& subcommand,
                         std::uint64_t seed) {
  fs::path dir = fs::path(f.out_dir) /
                 (subcommand + "-" + std::to_string(seed));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir.string() +
                      "': " + ec.message());
  }
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

// Wall-clock timestamps are quarantined here; result files stay byte-stable.
void write_run_log(const fs::path& dir, const std::string& text) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                std::gmtime(&tt));
  std::ofstream out(dir / "run.log", std::ios::binary | std::ios::app);
  if (out) out << stamp << ' ' << text << '\n';
}

json config_echo(const ExperimentConfig& c) {
  json j;
  j["family"] = c.env.describe();
  j["replicas"] = c.replicas;
  j["horizon"] = c.horizon;
  j["right_threshold"] = c.right_threshold;
  j["return_cutoff"] = c.return_cutoff;
  j["seed"] = c.master_seed;
  // The thread count never affects results, so it lives in the run.log
  // sidecar rather than the machine outputs.
  return j;
}

json transience_json(const TransienceEstimate& e) {
  json j;
  j["p_right"] = e.p_right;
  j["p_left"] = e.p_left;
  j["p_undecided"] = e.p_undecided;
  j["half_width_right"] = e.hw_right;
  j["half_width_left"] = e.hw_left;
  j["replicas"] = e.replicas;
  return j;
}

json recurrence_json(const RecurrenceEstimate& e) {
  json j;
  j["median_returns"] = e.median_returns;
  j["frac_return_after_cutoff"] = e.frac_return_after_cutoff;
  j["replicas"] = e.replicas;
  return j;
}

json speed_json(const SpeedEstimate& e) {
  json j;
  j["v_hat"] = e.v_hat;
  j["stderr"] = e.stderr_v;
  j["replicas"] = e.replicas;
  return j;
}

void emit_outputs(const fs::path& dir, const std::vector<ResultRecord>& records,
                  const json& summary, const std::string& log_line) {
  write_file(dir / "records.csv", format_records_csv(records));
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_run_log(dir, log_line);
}

int do_verify(const Flags& f) {
  const ConfigMap cfg = load_config(f);
  long lo = 0, hi = 3;
  if (const auto w = config_get(cfg, "verify", "window")) {
    std::tie(lo, hi) = parse_window(*w);
  }
  if (!f.window.empty()) std::tie(lo, hi) = parse_window(f.window);
  int depth = static_cast<int>(config_long(cfg, "verify", "depth", 4));
  if (f.depth) depth = *f.depth;
  long horizon = config_long(cfg, "verify", "horizon", 1000);
  if (f.horizon) horizon = *f.horizon;
  const long max_xyl = config_long(cfg, "verify", "max_xyl", 4);
  const std::uint64_t seed =
      f.seed ? *f.seed : config_u64(cfg, "experiment", "seed", 1);

  std::vector<CheckReport> reports;
  reports.push_back(check_z_equals_w(lo, hi, depth, horizon));
  reports.push_back(check_survival_equivalence(lo, hi, depth, horizon));
  reports.push_back(check_tau_eq_m_plus_one(lo, hi, depth, horizon));
  reports.push_back(check_subduality_sweep(lo, hi, depth, max_xyl));
  reports.push_back(check_u_properties(depth > 8 ? depth : 8));

  const fs::path dir = prepare_out_dir(f, "verify", seed);
  json summary;
  summary["config"] = {{"window_lo", lo},
                       {"window_hi", hi},
                       {"depth", depth},
                       {"horizon", horizon},
                       {"max_xyl", max_xyl},
                       {"seed", seed}};
  json checks = json::array();
  bool violated = false;
  std::string counterexamples;
  for (const CheckReport& r : reports) {
    std::cout << r.line() << '\n';
    json c;
    c["name"] = r.name;
    c["examined"] = r.examined;
    c["applicable"] = r.applicable;
    c["violations"] = r.violations;
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(c);
    if (!r.ok()) {
      violated = true;
      counterexamples += "# " + r.name + "\n" + r.first_counterexample + "\n";
    }
  }
  summary["checks"] = checks;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  if (violated) write_file(dir / "counterexamples.txt", counterexamples);
  write_run_log(dir, "verify window " + std::to_string(lo) + ":" +
                          std::to_string(hi) + " depth " +
                          std::to_string(depth));
  return violated ? kExitViolation : kExitOk;
}

int do_experiment(const std::string& kind, const Flags& f) {
  const ConfigMap cfg = load_config(f);
  const ExperimentConfig config = effective_config(f, cfg);

  json summary;
  summary["estimator"] = kind;
  summary["config"] = config_echo(config);
  std::vector<ResultRecord> records;

  if (kind == "zero-one") {
    ZeroOneVerdict v = zero_one_scan(config);
    records = std::move(v.records);
    json z = transience_json(v.estimate);
    z["inside_band"] = v.inside_band;
    z["horizon_used"] = v.horizon_used;
    z["reran"] = v.reran;
    summary["estimates"]["zero_one"] = z;
  } else {
    records = run_replicas(config);
    if (kind == "transience" || kind == "simulate") {
      summary["estimates"]["transience"] = transience_json(
          transience_from(records));
    }
    if (kind == "recurrence" || kind == "simulate") {
      summary["estimates"]["recurrence"] = recurrence_json(
          recurrence_from(records, config.return_cutoff));
    }
    if (kind == "speed" || kind == "simulate") {
      summary["estimates"]["speed"] = speed_json(speed_from(records));
    }
  }

  const fs::path dir = prepare_out_dir(f, kind, config.master_seed);
  emit_outputs(dir, records, summary,
               kind + " " + config.env.describe() + " replicas " +
                   std::to_string(config.replicas) + " threads " +
                   std::to_string(config.threads));
  std::cout << kind << ": " << config.env.describe() << ", "
            << config.replicas << " replicas, horizon " << config.horizon
            << "; outputs in " << dir.string() << '\n';
  return kExitOk;
}

int do_delta_sweep(const Flags& f) {
  const ConfigMap cfg = load_config(f);
  const ExperimentConfig config = effective_config(f, cfg);
  std::vector<EnvFamilySpec> specs;
  if (const auto s = parse_sweep_specs(cfg)) {
    specs = *s;
  } else {
    // Default grid: column drifts -2.4, -0.4, 0.4, 2.4.
    specs = {EnvFamilySpec::iid_bounded(3, 0.1),
             EnvFamilySpec::iid_bounded(2, 0.4),
             EnvFamilySpec::iid_bounded(2, 0.6),
             EnvFamilySpec::iid_bounded(3, 0.9)};
  }
  const DeltaSweepResult result = delta_sweep(config, specs);

  json summary;
  summary["estimator"] = "delta_sweep";
  summary["config"] = config_echo(config);
  json rows = json::array();
  for (const DeltaRow& row : result.rows) {
    json r;
    r["family"] = row.spec.describe();
    r["delta"] = row.delta;
    r["transience"] = transience_json(row.transience);
    r["speed"] = speed_json(row.speed);
    rows.push_back(r);
  }
  summary["rows"] = rows;

  const fs::path dir = prepare_out_dir(f, "delta-sweep", config.master_seed);
  emit_outputs(dir, result.records, summary,
               "delta-sweep over " + std::to_string(specs.size()) + " specs");
  std::cout << "delta-sweep:\n";
  for (const DeltaRow& row : result.rows) {
    std::cout << "  delta " << format_double(row.delta) << ": p_right "
              << format_double(row.transience.p_right) << ", p_left "
              << format_double(row.transience.p_left) << ", v_hat "
              << format_double(row.speed.v_hat) << '\n';
  }
  std::cout << "outputs in " << dir.string() << '\n';
  return kExitOk;
}

int do_trace(const Flags& f) {
  if (f.table_path.empty()) {
    throw ConfigError("trace requires --table FILE");
  }
  std::ifstream in(f.table_path, std::ios::binary);
  if (!in) throw ConfigError("cannot read table file '" + f.table_path + "'");
  const ArrowTable table = ArrowTable::parse(in);
  const ArrowEnvironment a = ArrowEnvironment::from_table(table);
  StopRule stop;
  stop.targets = {f.trace_target};
  stop.horizon = f.horizon ? *f.horizon : 1000;
  const WalkTrace trace = run_walk(a, f.trace_start, stop);

  std::ostringstream line;
  for (std::size_t i = 0; i < trace.positions.size(); ++i) {
    if (i) line << ',';
    line << trace.positions[i];
  }
  std::cout << line.str() << '\n';
  const HittingReport hit = hitting_time(trace, f.trace_target);
  if (hit.hit) {
    std::cout << "T[" << f.trace_target << "] = " << hit.step << '\n';
  } else {
    std::cout << "T[" << f.trace_target << "] not hit within "
              << stop.horizon << '\n';
  }

  const std::uint64_t seed = f.seed ? *f.seed : 1;
  const fs::path dir = prepare_out_dir(f, "trace", seed);
  write_file(dir / "trace.txt", dump_trace(trace));
  write_run_log(dir, "trace " + f.table_path);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Excited-walk laboratory: exhaustive identity checks on finite arrow "
      "tables and reproducible Monte Carlo estimation"};
  app.require_subcommand(1);

  Flags verify_flags, trace_flags;
  std::map<std::string, Flags> exp_flags;

  CLI::App* verify = app.add_subcommand(
      "verify",
      "Exhaustively check the walk/Z identities on all tables of a window "
      "(defaults: window 0:3, depth 4, horizon 1000, x/y/l up to 4)");
  add_common_flags(verify, verify_flags);
  verify->add_option("--window", verify_flags.window,
                     "Site window lo:hi (default 0:3)");
  verify->add_option("--depth", verify_flags.depth,
                     "Explicit bits per column (default 4)");

  const std::vector<std::string> estimators = {
      "simulate", "speed", "transience", "recurrence", "zero-one"};
  const std::map<std::string, std::string> estimator_help = {
      {"simulate", "Run replicas and report all estimates"},
      {"speed", "Estimate the limiting speed X_horizon / horizon"},
      {"transience", "Estimate directional-transience proxy frequencies"},
      {"recurrence", "Estimate return-to-0 statistics"},
      {"zero-one",
       "Check the transience frequency lies in [0,0.05] u [0.95,1], "
       "doubling the horizon once if needed"}};
  for (const std::string& name : estimators) {
    CLI::App* sub = app.add_subcommand(name, estimator_help.at(name));
    add_common_flags(sub, exp_flags[name]);
  }

  CLI::App* sweep = app.add_subcommand(
      "delta-sweep",
      "Monte Carlo over a grid of bounded-stack environments ordered by "
      "column drift (default grid drifts: -2.4 -0.4 0.4 2.4)");
  add_common_flags(sweep, exp_flags["delta-sweep"]);

  CLI::App* trace = app.add_subcommand(
      "trace", "Walk an explicit arrow table and print the trajectory");
  add_common_flags(trace, trace_flags);
  trace->add_option("--table", trace_flags.table_path,
                    "Arrow table file (one line per site: 'x: b1 b2 ... bD')");
  trace->add_option("--start", trace_flags.trace_start,
                    "Start site (default 0)");
  trace->add_option("--target", trace_flags.trace_target,
                    "Stop on arrival at this site (default -1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(verify)) return do_verify(verify_flags);
    if (app.got_subcommand(trace)) return do_trace(trace_flags);
    if (app.got_subcommand(sweep)) return do_delta_sweep(exp_flags["delta-sweep"]);
    for (const std::string& name : estimators) {
      if (app.got_subcommand(name)) return do_experiment(name, exp_flags[name]);
    }
    std::cerr << "no subcommand selected\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConstructionError& e) {
    std::cerr << "invalid specification: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> all;
  all.reserve(args.size() + 1);
  all.push_back("cookiewalk");
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(all.size());
  for (const std::string& s : all) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cookiewalk
