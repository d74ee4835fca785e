#pragma once
// Exhaustive machine checks of the deterministic walk/Z-process identities
// on finite arrow tables, plus the statistical coupling-law check.
//
// Finite tables make every trajectory computable: inside the window the
// explicit bits plus alternating tails decide each step, and a walker that
// leaves the window to the right marches off deterministically (first
// visits at fresh sites step right).  Each sweep therefore classifies every
// table as either "hits -1" or "escapes right", and asserts the identities
// on the applicable class.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cookiewalk/arrow_env.hpp"
#include "cookiewalk/walk.hpp"

namespace cookiewalk {

struct CheckReport {
  std::string name;
  long examined = 0;
  long applicable = 0;
  long violations = 0;
  std::string first_counterexample;  // table text + inputs; empty when clean
  std::string note;                  // auxiliary statistics

  bool ok() const { return violations == 0; }
  std::string line() const;  // "name examined applicable violations"
};

// Calls fn for every table on the window, codes ascending (so reruns find
// the same first counterexample); returns the number of tables.  Refuses
// windows needing more than max_bits bits.
long for_each_table(long x_lo, long x_hi, int depth,
                    const std::function<void(const ArrowTable&)>& fn,
                    int max_bits = 24);

enum class TableFate {
  hits_minus_one,  // the walk from 0 reaches -1 within the horizon
  escapes_right,   // the walk reaches x_hi + 1 and marches off for good
  undetermined,    // horizon exhausted (does not occur at default budgets)
};

struct FateReport {
  TableFate fate = TableFate::undetermined;
  WalkTrace trace;  // stopped at -1 or x_hi + 1
};

FateReport classify_table(const ArrowEnvironment& a, long x_hi, long horizon);

// Z+ from 1 equals the crossing counts W when the walk hits -1, and
// dominates them when it escapes right.
CheckReport check_z_equals_w(long x_lo, long x_hi, int depth, long horizon);

// The walk hits -1 iff Z+ from 1 goes extinct.
CheckReport check_survival_equivalence(long x_lo, long x_hi, int depth,
                                       long horizon);

// On tables where the walk hits -1, the extinction time of Z+ equals the
// pre-hit maximum plus one.
CheckReport check_tau_eq_m_plus_one(long x_lo, long x_hi, int depth,
                                    long horizon);

// Crossing bookkeeping: before a hit of -1, each edge {n-1, n} (n >= 1) is
// crossed rightward exactly as often as leftward; on an escape to the
// right, rightward crossings exceed leftward by exactly one.
CheckReport check_crossing_remark(long x_lo, long x_hi, int depth,
                                  long horizon);

// Monotonicity of U+/U- and the strict composition bounds
// U+(U-(x)) < x and U-(U+(x)) < x for x >= 1, over all depth-bit columns.
CheckReport check_u_properties(int depth);

// check_subduality over all tables and all 1 <= x, y, l <= max_xyl.
CheckReport check_subduality_sweep(long x_lo, long x_hi, int depth,
                                   long max_xyl, long u_budget = 100000);

// Total-variation distance between the laws of the walk's position after
// `steps` steps under (i) direct cookie sampling and (ii) a walk on
// realized arrows, for a constant per-site profile.
CheckReport check_coupling_law(const std::vector<double>& profile,
                               long samples, long steps, std::uint64_t seed,
                               double threshold = 0.02);

}  // namespace cookiewalk
