// Config parsing and the CLI entry point: section/key handling with named
// errors, env-spec assembly, flag precedence, subcommand exit codes, and the
// on-disk output layout with byte-identical reruns.

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cookiewalk/cli.hpp"
#include "cookiewalk/config.hpp"
#include "cookiewalk/cookie_env.hpp"

using namespace cookiewalk;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("cookiewalk_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

}  // namespace

TEST_CASE("parse_config_text: sections, comments, trimming") {
  ConfigMap cfg = parse_config_text(
      "# leading comment\n"
      "[experiment]\n"
      "replicas = 50\n"
      "seed=9  ; trailing comment\n"
      "\n"
      "[environment]\n"
      "variant = single_cookie\n"
      "p = 0.9\n");
  CHECK(config_get(cfg, "experiment", "replicas") == std::string("50"));
  CHECK(config_get(cfg, "experiment", "seed") == std::string("9"));
  CHECK(config_get(cfg, "environment", "variant") == std::string("single_cookie"));
  CHECK_FALSE(config_get(cfg, "experiment", "missing").has_value());
  CHECK(config_long(cfg, "experiment", "replicas", 1) == 50);
  CHECK(config_u64(cfg, "experiment", "seed", 0) == 9);
  CHECK(config_double(cfg, "environment", "p", 0.0) == doctest::Approx(0.9));
}

TEST_CASE("parse_config_text: errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_config_text("key = 1\n"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[a]\nnot-a-pair\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[unclosed\n"),
                       doctest::Contains("line 1"), ConfigError);
}

TEST_CASE("typed lookups name section.key on conversion failures") {
  ConfigMap cfg = parse_config_text("[experiment]\nreplicas = soon\n");
  CHECK_THROWS_WITH_AS(config_long(cfg, "experiment", "replicas", 1),
                       doctest::Contains("experiment.replicas"), ConfigError);
}

TEST_CASE("parse_window: lo:hi with validation") {
  CHECK(parse_window("0:3") == std::pair<long, long>{0, 3});
  CHECK(parse_window("-2:5") == std::pair<long, long>{-2, 5});
  CHECK_THROWS_AS(parse_window("5:2"), ConfigError);
  CHECK_THROWS_AS(parse_window("03"), ConfigError);
  CHECK_THROWS_AS(parse_window("a:b"), ConfigError);
}

TEST_CASE("parse_env_spec: all four variants") {
  ConfigMap single = parse_config_text(
      "[environment]\nvariant = single_cookie\np = 0.8\n");
  EnvFamilySpec s = parse_env_spec(single).value();
  CHECK(s.kind == EnvFamilySpec::Kind::single_cookie);
  CHECK(s.p == doctest::Approx(0.8));

  ConfigMap iid = parse_config_text(
      "[environment]\nvariant = iid_bounded\nM = 3\np = 0.9\n");
  EnvFamilySpec i = parse_env_spec(iid).value();
  CHECK(i.kind == EnvFamilySpec::Kind::iid_bounded);
  CHECK(i.stack_size == 3);

  ConfigMap prof = parse_config_text(
      "[environment]\nvariant = constant_profile\nprofile = 0.7 0.3\n");
  EnvFamilySpec c = parse_env_spec(prof).value();
  CHECK(c.kind == EnvFamilySpec::Kind::constant_profile);
  REQUIRE(c.profile.size() == 2);
  CHECK(c.profile[1] == doctest::Approx(0.3));

  ConfigMap markov = parse_config_text(
      "[environment]\n"
      "variant = markov_modulated\n"
      "states = 0.8 0.6 | 0.3 0.4\n"
      "matrix = 0.9 0.1 | 0.2 0.8\n"
      "window = 32\n");
  EnvFamilySpec m = parse_env_spec(markov).value();
  CHECK(m.kind == EnvFamilySpec::Kind::markov_modulated);
  REQUIRE(m.state_profiles.size() == 2);
  CHECK(m.state_profiles[0][1] == doctest::Approx(0.6));
  CHECK(m.transition[1][0] == doctest::Approx(0.2));
  CHECK(m.window == 32);

  CHECK_FALSE(parse_env_spec(parse_config_text("[experiment]\nseed = 1\n")).has_value());
}

TEST_CASE("parse_env_spec: missing or unknown fields are config errors") {
  CHECK_THROWS_WITH_AS(
      parse_env_spec(parse_config_text("[environment]\nvariant = iid_bounded\np = 0.9\n")),
      doctest::Contains("environment.M"), ConfigError);
  CHECK_THROWS_AS(
      parse_env_spec(parse_config_text("[environment]\nvariant = mystery\n")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_env_spec(parse_config_text("[environment]\np = 0.9\n")),
      ConfigError);
}

TEST_CASE("parse_sweep_specs: M:p pairs") {
  ConfigMap cfg = parse_config_text("[sweep]\nspecs = 3:0.1 2:0.4 2:0.6 3:0.9\n");
  std::vector<EnvFamilySpec> specs = parse_sweep_specs(cfg).value();
  REQUIRE(specs.size() == 4);
  CHECK(specs[0].stack_size == 3);
  CHECK(specs[0].p == doctest::Approx(0.1));
  CHECK(specs[3].p == doctest::Approx(0.9));
  CHECK_THROWS_AS(parse_sweep_specs(parse_config_text("[sweep]\nspecs = 3-0.1\n")),
                  ConfigError);
  CHECK_FALSE(parse_sweep_specs(parse_config_text("[experiment]\nseed=1\n")).has_value());
}

TEST_CASE("parse_experiment_config: defaults plus overrides") {
  ExperimentConfig defaults;
  defaults.replicas = 200;
  defaults.master_seed = 1;
  ConfigMap cfg = parse_config_text(
      "[environment]\nvariant = single_cookie\np = 0.7\n"
      "[experiment]\nreplicas = 25\nhorizon = 5000\nseed = 77\nthreads = 2\n");
  ExperimentConfig c = parse_experiment_config(cfg, defaults);
  CHECK(c.replicas == 25);
  CHECK(c.horizon == 5000);
  CHECK(c.master_seed == 77);
  CHECK(c.threads == 2);
  CHECK(c.env.kind == EnvFamilySpec::Kind::single_cookie);
  CHECK(c.env.p == doctest::Approx(0.7));
}

TEST_CASE("run_cli: verify on a tiny window exits 0") {
  fs::path out = fresh_dir("verify");
  int code = run_cli({"verify", "--window", "0:1", "--depth", "2",
                      "--out", out.string()});
  CHECK(code == 0);
  fs::path dir = out / "verify-1";
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "run.log"));
  CHECK_FALSE(fs::exists(dir / "counterexamples.txt"));
}

TEST_CASE("run_cli: usage errors exit 2") {
  CHECK(run_cli({"no-such-subcommand"}) == 2);
  CHECK(run_cli({"verify", "--no-such-flag"}) == 2);
  CHECK(run_cli({"simulate", "--config", "/nonexistent/path.cfg"}) == 2);
  CHECK(run_cli({"trace"}) == 2);  // --table is required
  CHECK(run_cli({"verify", "--window", "backwards"}) == 2);
}

TEST_CASE("run_cli: trace reproduces the documented hand walk") {
  fs::path out = fresh_dir("trace");
  fs::path table = out / "hand_table.txt";
  spit(table, "0: 1 0 0 0\n1: 0 0 0 0\n");
  int code = run_cli({"trace", "--table", table.string(), "--start", "0",
                      "--target", "-1", "--out", out.string()});
  CHECK(code == 0);
  std::string dump = slurp(out / "trace-1" / "trace.txt");
  CHECK(dump == "0 0 1 1\n1 1 1 0\n2 0 2 0\n");
}

TEST_CASE("run_cli: experiment layout and byte-identical reruns") {
  fs::path out = fresh_dir("rerun");
  std::vector<std::string> args = {
      "recurrence", "--replicas", "12", "--horizon", "1200",
      "--seed", "5", "--threads", "1", "--out", out.string()};
  REQUIRE(run_cli(args) == 0);
  fs::path dir = out / "recurrence-5";
  REQUIRE(fs::exists(dir / "records.csv"));
  REQUIRE(fs::exists(dir / "summary.json"));
  std::string csv1 = slurp(dir / "records.csv");
  std::string json1 = slurp(dir / "summary.json");
  CHECK(csv1.rfind("replica,env_seed,u_seed,final_x,t_minus1,last_return,returns,speed\n", 0) == 0);
  CHECK(json1.find("\"seed\": 5") != std::string::npos);

  // Rerun with a different thread count: identical machine outputs.
  std::vector<std::string> args3 = args;
  args3[args3.size() - 3] = "3";  // --threads 3
  REQUIRE(run_cli(args3) == 0);
  CHECK(slurp(dir / "records.csv") == csv1);
  CHECK(slurp(dir / "summary.json") == json1);
}

TEST_CASE("run_cli: flags override config file values") {
  fs::path out = fresh_dir("precedence");
  fs::path cfgfile = out / "exp.cfg";
  spit(cfgfile,
       "[environment]\nvariant = single_cookie\np = 0.9\n"
       "[experiment]\nreplicas = 7\nhorizon = 600\nreturn_cutoff = 100\n"
       "seed = 11\nthreads = 1\n");

  REQUIRE(run_cli({"recurrence", "--config", cfgfile.string(), "--out",
                   out.string()}) == 0);
  CHECK(fs::exists(out / "recurrence-11" / "records.csv"));

  // --seed beats the config's seed = 11, and the out dir reflects that.
  REQUIRE(run_cli({"recurrence", "--config", cfgfile.string(), "--seed", "12",
                   "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "recurrence-12" / "records.csv"));

  std::string a = slurp(out / "recurrence-11" / "records.csv");
  std::string b = slurp(out / "recurrence-12" / "records.csv");
  CHECK(a != b);
  // Both ran 7 replicas from the config: header + 7 rows.
  CHECK(std::count(a.begin(), a.end(), '\n') == 8);
  CHECK(std::count(b.begin(), b.end(), '\n') == 8);
}

TEST_CASE("run_cli: simulate writes all three estimate blocks") {
  fs::path out = fresh_dir("simulate");
  REQUIRE(run_cli({"simulate", "--replicas", "10", "--horizon", "1500",
                   "--seed", "3", "--threads", "1", "--out", out.string()}) == 0);
  std::string json = slurp(out / "simulate-3" / "summary.json");
  CHECK(json.find("\"transience\"") != std::string::npos);
  CHECK(json.find("\"recurrence\"") != std::string::npos);
  CHECK(json.find("\"speed\"") != std::string::npos);
}

TEST_CASE("run_cli: delta-sweep emits one row per spec") {
  fs::path out = fresh_dir("dsweep");
  fs::path cfgfile = out / "sweep.cfg";
  spit(cfgfile,
       "[sweep]\nspecs = 2:0.2 2:0.8\n"
       "[experiment]\nreplicas = 8\nhorizon = 400\nreturn_cutoff = 50\n"
       "seed = 21\nthreads = 1\n");
  REQUIRE(run_cli({"delta-sweep", "--config", cfgfile.string(), "--out",
                   out.string()}) == 0);
  fs::path dir = out / "delta-sweep-21";
  std::string json = slurp(dir / "summary.json");
  CHECK(json.find("\"delta\": -1.2") != std::string::npos);
  CHECK(json.find("\"delta\": 1.2") != std::string::npos);
  std::string csv = slurp(dir / "records.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header + 2 * 8
}
