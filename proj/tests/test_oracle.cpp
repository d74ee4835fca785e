// Exhaustive table checks: enumeration counts, frozen fate classifications
// for small windows, zero-violation sweeps, and the coupling-law distance.

#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cookiewalk/arrow_env.hpp"
#include "cookiewalk/oracle.hpp"
#include "cookiewalk/zproc.hpp"

using namespace cookiewalk;

TEST_CASE("for_each_table: enumeration counts and order") {
  long n = 0;
  std::uint64_t expected = 0;
  long total = for_each_table(0, 0, 2, [&](const ArrowTable& t) {
    // Codes ascend 0,1,2,...: decode back and compare.
    std::uint64_t code = 0;
    for (int d = 0; d < t.depth; ++d) {
      if (t.at(0, d + 1)) code |= (1ull << d);
    }
    CHECK(code == expected);
    ++expected;
    ++n;
  });
  CHECK(n == 4);
  CHECK(total == 4);
  CHECK(for_each_table(0, 1, 2, [](const ArrowTable&) {}) == 16);
}

TEST_CASE("for_each_table refuses oversized windows") {
  CHECK_THROWS_WITH_AS(
      for_each_table(0, 4, 5, [](const ArrowTable&) {}),
      doctest::Contains("25"), UsageError);
}

TEST_CASE("classify_table: frozen fate counts for tiny windows") {
  // Window [0,0], depth 2: 4 tables, 2 hit -1 and 2 escape right.
  long hits = 0, escapes = 0, undetermined = 0;
  for_each_table(0, 0, 2, [&](const ArrowTable& t) {
    FateReport f = classify_table(ArrowEnvironment::from_table(t), 0, 1000);
    if (f.fate == TableFate::hits_minus_one) ++hits;
    else if (f.fate == TableFate::escapes_right) ++escapes;
    else ++undetermined;
  });
  CHECK(hits == 2);
  CHECK(escapes == 2);
  CHECK(undetermined == 0);

  // Window [0,1], depth 2: 16 tables, 11 hit and 5 escape.
  hits = escapes = undetermined = 0;
  for_each_table(0, 1, 2, [&](const ArrowTable& t) {
    FateReport f = classify_table(ArrowEnvironment::from_table(t), 1, 1000);
    if (f.fate == TableFate::hits_minus_one) ++hits;
    else if (f.fate == TableFate::escapes_right) ++escapes;
    else ++undetermined;
  });
  CHECK(hits == 11);
  CHECK(escapes == 5);
  CHECK(undetermined == 0);
}

TEST_CASE("classify_table: fates carry the defining trace") {
  // All-zero single column: immediate left step.
  FateReport down = classify_table(
      ArrowEnvironment::from_table(ArrowTable::from_code(0, 0, 2, 0)), 0, 1000);
  CHECK(down.fate == TableFate::hits_minus_one);
  CHECK(down.trace.positions.back() == -1);

  // Column (1,0): right to 1 = x_hi + 1, then out-of-window arrows only.
  FateReport up = classify_table(
      ArrowEnvironment::from_table(ArrowTable::from_code(0, 0, 2, 1)), 0, 1000);
  CHECK(up.fate == TableFate::escapes_right);
  CHECK(up.trace.positions.back() == 1);
}

TEST_CASE("check_z_equals_w: zero violations on [0,2] depth 3") {
  CheckReport r = check_z_equals_w(0, 2, 3, 1000);
  CHECK(r.examined == 512);
  CHECK(r.applicable == 512);  // every fate is determined on this window
  CHECK(r.violations == 0);
  CHECK(r.ok());
  CHECK(r.first_counterexample.empty());
  CHECK(r.line() == "z_equals_w 512 512 0");
}

TEST_CASE("check_survival_equivalence: zero violations on [0,2] depth 3") {
  CheckReport r = check_survival_equivalence(0, 2, 3, 1000);
  CHECK(r.examined == 512);
  CHECK(r.applicable == 512);
  CHECK(r.violations == 0);
}

TEST_CASE("check_tau_eq_m_plus_one: applicable = finite-case tables") {
  CheckReport r = check_tau_eq_m_plus_one(0, 2, 3, 1000);
  CHECK(r.examined == 512);
  CHECK(r.applicable == 396);  // frozen count of tables that hit -1
  CHECK(r.violations == 0);
}

TEST_CASE("check_crossing_remark: zero violations on [0,2] depth 3") {
  CheckReport r = check_crossing_remark(0, 2, 3, 1000);
  CHECK(r.examined == 512);
  CHECK(r.applicable == 512);
  CHECK(r.violations == 0);
}

TEST_CASE("check_subduality_sweep: zero violations on [0,1] depth 2") {
  CheckReport r = check_subduality_sweep(0, 1, 2, 3);
  CHECK(r.examined == 16 * 27);  // tables times (x,y,l) triples
  CHECK(r.applicable > 0);
  CHECK(r.applicable < r.examined);  // premise genuinely filters
  CHECK(r.violations == 0);
}

TEST_CASE("check_u_properties: documented composition example and counts") {
  // b = (1,1,0,...): u_minus(b, u_plus(b,1)) = u_minus(b,2) = 0 < 1.
  Column b = table_column(0b00000011, 8);
  UResult up = u_plus(b, 1, 1000);
  REQUIRE(up.finite());
  CHECK(up.value == 2);
  UResult comp = u_minus(b, up.value, 1000);
  REQUIRE(comp.finite());
  CHECK(comp.value == 0);

  CheckReport r = check_u_properties(8);
  // 256 columns x 11 x-values x 4 properties.
  CHECK(r.examined == 256 * 11 * 4);
  CHECK(r.violations == 0);
  // Monotonicity applies at every x; compositions need x >= 1.
  CHECK(r.applicable == 256 * (2 * 11 + 2 * 10));
}

TEST_CASE("check_u_properties at other depths stays clean") {
  for (int depth : {1, 2, 5}) {
    CheckReport r = check_u_properties(depth);
    CHECK(r.violations == 0);
    CHECK(r.examined == (1l << depth) * (depth + 3) * 4);
  }
}

TEST_CASE("report lines render name examined applicable violations") {
  CheckReport r;
  r.name = "demo";
  r.examined = 10;
  r.applicable = 7;
  r.violations = 0;
  CHECK(r.line() == "demo 10 7 0");
}

TEST_CASE("check_coupling_law: trivial regimes at reduced sample counts") {
  // Nearly deterministic right drift: both laws concentrate on X_20 = 20.
  CheckReport det = check_coupling_law({0.999, 0.999, 0.999, 0.999}, 10000, 20, 42);
  CHECK(det.violations == 0);

  // Fair coins: the two samplers draw the same simple-random-walk law.
  CheckReport fair = check_coupling_law({0.5}, 20000, 20, 43);
  CHECK(fair.violations == 0);

  CHECK_THROWS_AS(check_coupling_law({0.7, 0.3}, 100, 20, 1), UsageError);
}
