#pragma once
// The dual processes: column transforms U+/U- and the site-indexed
// processes Z+ (rightward) and Z- (leftward).
//
// For a 0/1 column b, U+_b(x) is the number of ones strictly before the
// x-th zero of b (1-based positions), with U+_b(0) = 0; U-_b is U+ of the
// complemented column.  Z+ starts from a value y at site 0 and iterates
// Z_n = U+ of column a(n-1, .) applied to Z_{n-1}; Z- iterates U- over
// columns a(1-n, .).  Extinction of Z+ is equivalent to the walk hitting
// -1, which the oracle module checks exhaustively.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cookiewalk/arrow_env.hpp"

namespace cookiewalk {

// A 0/1 column accessor over 1-based visit indices.
using Column = std::function<int(long)>;

// Column x of an arrow environment.
Column column_of(const ArrowEnvironment& a, long x);

// Explicit finite column: bit i (1-based, i <= depth) is bit (i-1) of
// `code`; beyond depth the column continues 0,1,0,1,... like a table column.
Column table_column(std::uint64_t code, int depth);

struct UResult {
  enum class Outcome { finite, exceeds_budget };
  Outcome outcome = Outcome::finite;
  long value = 0;   // finite only
  long budget = 0;  // exceeds_budget only

  bool finite() const { return outcome == Outcome::finite; }
  static UResult of(long v) { return {Outcome::finite, v, 0}; }
  static UResult overflow(long budget) {
    return {Outcome::exceeds_budget, 0, budget};
  }
};

// Number of ones strictly before the x-th zero of b; scans at most `budget`
// column entries before giving up.
UResult u_plus(const Column& b, long x, long budget);

// u_plus of the complemented column.
UResult u_minus(const Column& b, long x, long budget);

enum class ZDirection { plus, minus };

struct ZRun {
  enum class Status { extinct_at, alive_at, budget_exhausted_in_u };

  ZDirection direction = ZDirection::plus;
  long start_value = 1;
  std::vector<long> values;  // Z_0, Z_1, ...
  Status status = Status::alive_at;
  long extinct_step = 0;  // extinct_at: first n with Z_n = 0
  long step_budget = 0;   // alive_at: the step budget that was reached

  // Z_n, with the convention that the process stays at 0 after extinction.
  long value_at(long n) const;
};

// Iterates the process for at most `steps` steps from Z_0 = y >= 1.
ZRun z_run(const ArrowEnvironment& a, ZDirection direction, long y, long steps,
           long u_budget);

std::optional<long> extinction_time(const ZRun& run);

struct SubdualityVerdict {
  enum class Kind { holds, violated, not_applicable };
  Kind kind = Kind::not_applicable;
  std::string details;  // populated on violation

  bool holds() const { return kind == Kind::holds; }
  bool violated() const { return kind == Kind::violated; }
};

// If Z+ started from x on `a` has Z+_l >= y, then Z- started from y on
// shift(a, l-1) must come back down to Z-_l <= x.  The premise failing, or
// any U evaluation exceeding its budget, makes the instance not applicable.
SubdualityVerdict check_subduality(const ArrowEnvironment& a, long x, long y,
                                   long l, long u_budget);

}  // namespace cookiewalk
