#pragma once
// The excited walk itself: deterministic motion on an arrow environment.
//
// The walker at site x making its k-th visit there steps right iff
// arrow_at(x, k) = 1.  run_walk records the full trajectory with
// consumption counters; summarize_walk streams the same dynamics without
// storing the trajectory, for long Monte Carlo horizons.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cookiewalk/arrow_env.hpp"

namespace cookiewalk {

struct StopRule {
  std::vector<long> targets;  // stop on arrival at any of these sites
  long horizon = 1;           // stop after this many steps
  std::optional<std::pair<long, long>> window;  // stop on leaving [lo, hi]
};

struct WalkTrace {
  enum class Termination { hit_target, horizon_exhausted, left_window };

  long start = 0;
  long horizon = 0;
  std::vector<long> positions;  // X_0, X_1, ...
  std::unordered_map<long, long> consumption;  // site -> visits consumed
  Termination termination = Termination::horizon_exhausted;
  long hit_site = 0;  // hit_target only
  long hit_step = 0;  // hit_target / left_window: step index of the event

  long steps() const { return static_cast<long>(positions.size()) - 1; }
};

struct HittingReport {
  long target = 0;
  bool hit = false;
  long step = 0;     // valid when hit
  long horizon = 0;  // budget behind a negative answer
};

struct Excursion {
  long begin_step = 0;
  std::optional<long> end_step;  // empty: still open at the trace end
};

struct RegenerationProbe {
  bool refuted = false;  // the fresh walk from m did hit m - 1
  long step = 0;         // hitting step when refuted
  long horizon = 0;
};

// Stop conditions are checked on arrival (including at step 0), targets
// before window before horizon.
WalkTrace run_walk(const ArrowEnvironment& a, long start, const StopRule& stop);

// First index t with positions[t] = m.
HittingReport hitting_time(const WalkTrace& trace, long m);

// W_n = number of right crossings of edge {n-1, n} strictly before step
// `up_to`, for n >= 1; W_0 = 1 by convention.  Returned dense vector covers
// n = 0 .. (max position observed) + 1.
std::vector<long> crossings(const WalkTrace& trace, long up_to);

// Companion count of left crossings of the same edges (index n counts steps
// n -> n-1), same indexing as crossings().
std::vector<long> left_crossings(const WalkTrace& trace, long up_to);

// Maximum position strictly before the first hit of -1; empty when -1 was
// not hit within the trace.
std::optional<long> max_before_hit(const WalkTrace& trace);

// Maximal segments that start and end at 0 and stay strictly positive in
// between; a segment still positive at the trace end is reported open.
std::vector<Excursion> right_excursions(const WalkTrace& trace);

// For each m in [m_lo, m_hi]: start a fresh walk at m (fresh consumption,
// same environment) with target m - 1.  The probe is counterfactual: each m
// consumes arrows from its own copy of the environment.
std::map<long, RegenerationProbe> optional_regeneration_positions(
    const ArrowEnvironment& a, long m_lo, long m_hi, long horizon);

// Debug dump, one line per step: "t x k arrow".
std::string dump_trace(const WalkTrace& trace);

// Streaming full-horizon walk statistics from start 0.
struct WalkSummary {
  long final_x = 0;
  long t_minus1 = -1;       // first step hitting -1, or -1 if never
  long returns = 0;         // visits to 0 at steps t >= 1
  long last_return = 0;     // last such step, 0 if none
  long max_x = 0;
  long min_x = 0;
  long last_upcross = -1;   // last step arriving at +level from +level - 1
  long last_downcross = -1; // last step arriving at -level from -level + 1
  long steps = 0;           // steps actually taken
};

WalkSummary summarize_walk(const ArrowEnvironment& a, long horizon, long level,
                           bool stop_at_minus_one = false);

}  // namespace cookiewalk
