#pragma once
// Reproducible Monte Carlo: directional-transience proxies, recurrence
// statistics, speed estimation, the zero-one band scan, the drift-parameter
// sweep, and the walk/Z+ agreement crosscheck at sampling scale.
//
// Each replica is a pure function of (master seed, replica id): the
// environment seed and the uniform seed are hashed from them, so results
// are bit-identical regardless of thread count or execution order.

#include <cstdint>
#include <string>
#include <vector>

#include "cookiewalk/cookie_env.hpp"

namespace cookiewalk {

struct ExperimentConfig {
  EnvFamilySpec env = EnvFamilySpec::single_cookie(0.9);
  long replicas = 200;
  long horizon = 100000;
  long right_threshold = 1000;  // R: proxy displacement threshold
  long return_cutoff = 1000;    // recurrence: "returned after this step"
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: machine parallelism

  void validate() const;  // throws ConstructionError
};

struct ResultRecord {
  long replica = 0;
  std::uint64_t env_seed = 0;
  std::uint64_t u_seed = 0;
  long final_x = 0;
  long t_minus1 = -1;    // first step hitting -1; -1 if never
  long last_return = 0;  // last step t >= 1 at site 0; 0 if none
  long returns = 0;
  double speed = 0.0;  // final_x / horizon
  int vote = 0;        // +1 right-transient proxy, -1 left, 0 undecided
};

// Runs all replicas (in parallel when threads != 1) and returns them in
// replica order.  The Markov materialization window is enlarged to cover
// the horizon automatically.
std::vector<ResultRecord> run_replicas(const ExperimentConfig& config);

// CSV with the fixed header
// replica,env_seed,u_seed,final_x,t_minus1,last_return,returns,speed
std::string format_records_csv(const std::vector<ResultRecord>& records);

struct TransienceEstimate {
  double p_right = 0, p_left = 0, p_undecided = 0;
  double hw_right = 0, hw_left = 0;  // 95% normal half-widths, floored 1/N
  long replicas = 0;
};
TransienceEstimate transience_from(const std::vector<ResultRecord>& records);
TransienceEstimate estimate_transience(const ExperimentConfig& config);

struct RecurrenceEstimate {
  double median_returns = 0;
  double frac_return_after_cutoff = 0;
  long replicas = 0;
};
RecurrenceEstimate recurrence_from(const std::vector<ResultRecord>& records,
                                   long return_cutoff);
RecurrenceEstimate estimate_recurrence(const ExperimentConfig& config);

struct SpeedEstimate {
  double v_hat = 0;
  double stderr_v = 0;
  long replicas = 0;
};
SpeedEstimate speed_from(const std::vector<ResultRecord>& records);
SpeedEstimate estimate_speed(const ExperimentConfig& config);

struct ZeroOneVerdict {
  TransienceEstimate estimate;
  bool inside_band = false;  // p_right in [0, 0.05] u [0.95, 1]
  long horizon_used = 0;
  bool reran = false;  // one horizon-doubling rerun on an out-of-band result
  std::vector<ResultRecord> records;  // from the final attempt
};
ZeroOneVerdict zero_one_scan(const ExperimentConfig& config);

struct DeltaRow {
  EnvFamilySpec spec;
  double delta = 0;
  TransienceEstimate transience;
  SpeedEstimate speed;
};
struct DeltaSweepResult {
  std::vector<DeltaRow> rows;            // sorted by delta
  std::vector<ResultRecord> records;     // replica ids globalized per row
};
// Replica seeds are derived from (master seed, row index, replica), and the
// records' replica ids are row_index * replicas + r so one CSV holds the
// whole sweep.
DeltaSweepResult delta_sweep(const ExperimentConfig& base,
                             const std::vector<EnvFamilySpec>& specs);

struct SurvivalAgreement {
  long replicas = 0;
  long walk_decided = 0;    // walk hit -1 within the horizon
  long z_decided = 0;       // Z+ extinction resolved within budgets
  long both_decided = 0;
  long agreements = 0;      // both decided and consistent (tau = M + 1,
                            // and an extinct Z+ implies a hit the horizon
                            // could have seen)
  long disagreements = 0;
};
// On `replicas` realized environments, compares the walk's hit of -1
// against Z+ extinction.  z_steps_cap bounds the Z run probed when the walk
// itself was undecided; that probe also stops once the hitting time implied
// by the running crossing sum already exceeds the walk's horizon, since the
// comparison is then vacuous within the matched budgets.
SurvivalAgreement survival_crosscheck(const EnvFamilySpec& spec, long replicas,
                                      long horizon, std::uint64_t master_seed,
                                      long z_steps_cap = 10000,
                                      long u_budget = 1000000);

// Fixed decimal formatting used in all machine outputs.
std::string format_double(double v);

}  // namespace cookiewalk
