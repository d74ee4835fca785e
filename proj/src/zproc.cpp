#include "cookiewalk/zproc.hpp"

#include <sstream>

namespace cookiewalk {

Column column_of(const ArrowEnvironment& a, long x) {
  return [a, x](long n) { return a.arrow_at(x, n); };
}

Column table_column(std::uint64_t code, int depth) {
  if (depth < 1 || depth > 63) {
    throw UsageError("column depth must lie in [1, 63]");
  }
  return [code, depth](long n) -> int {
    if (n < 1) throw UsageError("visit indices are 1-based");
    if (n <= depth) return static_cast<int>((code >> (n - 1)) & 1u);
    const long j = n - depth;
    return (j % 2 == 0) ? 1 : 0;
  };
}

namespace {

UResult scan_for_zeros(const Column& b, long x, long budget, int zero_bit) {
  if (x < 0) throw UsageError("U transforms take non-negative arguments");
  if (budget < 1) throw UsageError("U scan budget must be >= 1");
  if (x == 0) return UResult::of(0);
  long ones = 0;
  long zeros = 0;
  for (long i = 1; i <= budget; ++i) {
    if (b(i) == zero_bit) {
      if (++zeros == x) return UResult::of(ones);
    } else {
      ++ones;
    }
  }
  return UResult::overflow(budget);
}

}  // namespace

UResult u_plus(const Column& b, long x, long budget) {
  return scan_for_zeros(b, x, budget, 0);
}

UResult u_minus(const Column& b, long x, long budget) {
  // Complementing the column swaps the roles of ones and zeros.
  return scan_for_zeros(b, x, budget, 1);
}

long ZRun::value_at(long n) const {
  if (n < 0) throw UsageError("Z is indexed from 0");
  if (n < static_cast<long>(values.size())) {
    return values[static_cast<std::size_t>(n)];
  }
  if (status == Status::extinct_at) return 0;
  throw UsageError("Z value beyond the realized run");
}

ZRun z_run(const ArrowEnvironment& a, ZDirection direction, long y, long steps,
           long u_budget) {
  if (y < 1) throw UsageError("Z starts from a positive value");
  if (steps < 1) throw UsageError("Z step budget must be >= 1");
  ZRun run;
  run.direction = direction;
  run.start_value = y;
  run.values.reserve(static_cast<std::size_t>(steps) + 1);
  run.values.push_back(y);
  for (long n = 1; n <= steps; ++n) {
    const long site = direction == ZDirection::plus ? n - 1 : 1 - n;
    const Column col = column_of(a, site);
    const long prev = run.values.back();
    const UResult r = direction == ZDirection::plus
                          ? u_plus(col, prev, u_budget)
                          : u_minus(col, prev, u_budget);
    if (!r.finite()) {
      run.status = ZRun::Status::budget_exhausted_in_u;
      return run;
    }
    run.values.push_back(r.value);
    if (r.value == 0) {
      run.status = ZRun::Status::extinct_at;
      run.extinct_step = n;
      return run;
    }
  }
  run.status = ZRun::Status::alive_at;
  run.step_budget = steps;
  return run;
}

std::optional<long> extinction_time(const ZRun& run) {
  if (run.status == ZRun::Status::extinct_at) return run.extinct_step;
  return std::nullopt;
}

SubdualityVerdict check_subduality(const ArrowEnvironment& a, long x, long y,
                                   long l, long u_budget) {
  if (x < 1 || y < 1 || l < 1) {
    throw UsageError("subduality instances need x, y, l >= 1");
  }
  SubdualityVerdict verdict;
  const ZRun up = z_run(a, ZDirection::plus, x, l, u_budget);
  if (up.status == ZRun::Status::budget_exhausted_in_u) return verdict;
  const long z_up = up.value_at(l);
  if (z_up < y) return verdict;  // premise fails

  const ZRun down = z_run(a.shift(l - 1), ZDirection::minus, y, l, u_budget);
  if (down.status == ZRun::Status::budget_exhausted_in_u) return verdict;
  const long z_down = down.value_at(l);
  if (z_down <= x) {
    verdict.kind = SubdualityVerdict::Kind::holds;
    return verdict;
  }
  verdict.kind = SubdualityVerdict::Kind::violated;
  std::ostringstream os;
  os << "x=" << x << " y=" << y << " l=" << l << " Z+_l=" << z_up
     << " Z-_l=" << z_down;
  verdict.details = os.str();
  return verdict;
}

}  // namespace cookiewalk
