// U-transforms and the dual processes: documented point values, frozen
// transform tables for three canonical columns, budget propagation,
// extinction bookkeeping, and the subduality verdicts.

#include <doctest.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "cookiewalk/arrow_env.hpp"
#include "cookiewalk/zproc.hpp"

using namespace cookiewalk;

namespace {

ArrowEnvironment hand_table() {
  return ArrowEnvironment::from_table(
      ArrowTable::parse_string("0: 1 0 0 0\n1: 0 0 0 0\n"));
}

}  // namespace

TEST_CASE("u_plus: documented point values") {
  Column alt = table_column(0b01010101, 8);  // 1,0,1,0,... then tail
  Column b1 = table_column(0b00001011, 8);   // 1,1,0,1,0,0,0,0

  // Any column at x = 0 gives 0.
  CHECK(u_plus(alt, 0, 100).value == 0);
  CHECK(u_plus(b1, 0, 100).value == 0);

  // b = (1,1,0,1,0,...): two ones precede the first zero.
  UResult r1 = u_plus(b1, 1, 100);
  REQUIRE(r1.finite());
  CHECK(r1.value == 2);

  // b = (1,0,1,0,...): ones at 1 and 3 precede the second zero at 4.
  UResult r2 = u_plus(alt, 2, 100);
  REQUIRE(r2.finite());
  CHECK(r2.value == 2);
}

TEST_CASE("u_minus: documented point values") {
  // b = (1,1,0,1,0,1,...): no zeros precede the second one.
  Column b = table_column(0b00001011, 8);
  UResult r = u_minus(b, 2, 100);
  REQUIRE(r.finite());
  CHECK(r.value == 0);

  // b = (0,0,1,...): two zeros precede the first one.
  Column c = table_column(0b00000100, 8);
  UResult rc = u_minus(c, 1, 100);
  REQUIRE(rc.finite());
  CHECK(rc.value == 2);

  CHECK(u_minus(b, 0, 100).value == 0);
}

TEST_CASE("frozen transform rows for three canonical depth-8 columns") {
  struct Row {
    std::uint64_t code;
    std::vector<long> up, um;  // x = 0..6
  };
  // Values frozen from an independent reference implementation.
  const std::vector<Row> rows = {
      {0x00, {0, 0, 0, 0, 0, 0, 0}, {0, 9, 10, 11, 12, 13, 14}},
      {0xFF, {0, 8, 9, 10, 11, 12, 13}, {0, 0, 0, 0, 0, 0, 0}},
      {0x55, {0, 1, 2, 3, 4, 4, 5}, {0, 0, 1, 2, 3, 5, 6}},
  };
  for (const Row& row : rows) {
    Column b = table_column(row.code, 8);
    for (long x = 0; x <= 6; ++x) {
      UResult up = u_plus(b, x, 1000);
      UResult um = u_minus(b, x, 1000);
      REQUIRE(up.finite());
      REQUIRE(um.finite());
      CHECK(up.value == row.up[static_cast<std::size_t>(x)]);
      CHECK(um.value == row.um[static_cast<std::size_t>(x)]);
    }
  }
}

TEST_CASE("u_plus round trip against the all-zero column") {
  // For the all-zero depth-8 column, the first one sits behind nine zeros,
  // and composing the transforms collapses back below the start.
  Column z = table_column(0x00, 8);
  UResult um1 = u_minus(z, 1, 1000);
  REQUIRE(um1.finite());
  CHECK(um1.value == 9);
  UResult back = u_plus(z, um1.value, 1000);
  REQUIRE(back.finite());
  CHECK(back.value == 0);
}

TEST_CASE("u_plus: exceeds_budget on a column with too few zeros") {
  ArrowEnvironment ones =
      ArrowEnvironment::from_function([](long, long) { return 1; });
  Column b = column_of(ones, 0);
  UResult r = u_plus(b, 1, 50);
  CHECK_FALSE(r.finite());
  CHECK(r.outcome == UResult::Outcome::exceeds_budget);
  CHECK(r.budget == 50);
  // u_minus of the same column is fine: zeros of the complement abound.
  CHECK(u_minus(b, 3, 50).value == 0);
}

TEST_CASE("table_column rejects bad depths") {
  CHECK_THROWS_AS(table_column(0, 0), UsageError);
  CHECK_THROWS_AS(table_column(0, 64), UsageError);
}

TEST_CASE("z_run plus on the hand table: values 1,1,0, extinct at 2") {
  ZRun run = z_run(hand_table(), ZDirection::plus, 1, 50, 1000);
  CHECK(run.values == std::vector<long>({1, 1, 0}));
  CHECK(run.status == ZRun::Status::extinct_at);
  CHECK(run.extinct_step == 2);
  CHECK(extinction_time(run) == std::optional<long>(2));
  // After extinction the process stays at 0 by convention.
  CHECK(run.value_at(0) == 1);
  CHECK(run.value_at(2) == 0);
  CHECK(run.value_at(10) == 0);
}

TEST_CASE("z_run minus on the hand table goes extinct immediately") {
  ZRun run = z_run(hand_table(), ZDirection::minus, 1, 50, 1000);
  CHECK(run.values == std::vector<long>({1, 0}));
  CHECK(extinction_time(run) == std::optional<long>(1));
}

TEST_CASE("z_run: all-(1,0,...) columns keep Z at 1 forever") {
  ArrowEnvironment a = ArrowEnvironment::from_function(
      [](long, long n) { return n % 2 == 1 ? 1 : 0; });
  ZRun run = z_run(a, ZDirection::plus, 1, 50, 1000);
  CHECK(run.status == ZRun::Status::alive_at);
  CHECK(run.step_budget == 50);
  REQUIRE(run.values.size() == 51);
  for (long v : run.values) {
    CHECK(v == 1);
  }
  CHECK_FALSE(extinction_time(run).has_value());
}

TEST_CASE("z_run: immediate extinction gives tau = 1") {
  // Start at 3 on an all-zero first column: no ones precede any zero.
  ArrowEnvironment a = ArrowEnvironment::from_table(
      ArrowTable::from_code(0, 1, 4, 0));
  ZRun run = z_run(a, ZDirection::plus, 3, 10, 1000);
  CHECK(run.values == std::vector<long>({3, 0}));
  CHECK(extinction_time(run) == std::optional<long>(1));
}

TEST_CASE("z_run: direction minus consumes columns at 0, -1, -2, ...") {
  // Build an environment whose column at site s is all-ones for s <= -1 and
  // all-zeros at 0; Z- from 1: U- of column a(0,.) = zeros before 1st one.
  ArrowEnvironment a = ArrowEnvironment::from_function(
      [](long x, long n) { return x <= -1 ? 1 : (n > 100 ? (n % 2) : 0); });
  // Column at 0: 0 repeated; first one far out -> U-(1) counts many zeros.
  ZRun run = z_run(a, ZDirection::minus, 1, 3, 1000);
  REQUIRE(run.values.size() >= 2);
  CHECK(run.values[1] == 100);  // zeros at visits 1..100 precede the first 1
  // Next steps use columns at -1, -2: all ones, so U- = 0 -> extinction.
  CHECK(extinction_time(run) == std::optional<long>(2));
}

TEST_CASE("z_run propagates U budget exhaustion") {
  ArrowEnvironment ones =
      ArrowEnvironment::from_function([](long, long) { return 1; });
  ZRun run = z_run(ones, ZDirection::plus, 1, 10, 50);
  CHECK(run.status == ZRun::Status::budget_exhausted_in_u);
}

TEST_CASE("z_run validates its start value") {
  CHECK_THROWS_AS(z_run(hand_table(), ZDirection::plus, 0, 5, 100), UsageError);
}

TEST_CASE("check_subduality: documented single-table example") {
  // a(0,.) = (1,1,0,...), x=1, y=2, l=1: Z+_1 = 2 >= 2, and Z- from 2 on the
  // unshifted environment drops to 0 <= 1.
  ArrowEnvironment a = ArrowEnvironment::from_table(
      ArrowTable::parse_string("0: 1 1 0\n"));
  SubdualityVerdict v = check_subduality(a, 1, 2, 1, 1000);
  CHECK(v.holds());

  // Premise failure: Z+_1 = 2 < 5.
  SubdualityVerdict na = check_subduality(a, 1, 5, 1, 1000);
  CHECK(na.kind == SubdualityVerdict::Kind::not_applicable);
}

TEST_CASE("check_subduality rejects non-positive parameters") {
  ArrowEnvironment a = hand_table();
  CHECK_THROWS_AS(check_subduality(a, 0, 1, 1, 100), UsageError);
  CHECK_THROWS_AS(check_subduality(a, 1, 0, 1, 100), UsageError);
  CHECK_THROWS_AS(check_subduality(a, 1, 1, 0, 100), UsageError);
}

TEST_CASE("column_of reads the environment's column") {
  ArrowEnvironment a = hand_table();
  Column c0 = column_of(a, 0);
  CHECK(c0(1) == 1);
  CHECK(c0(2) == 0);
  Column c1 = column_of(a, 1);
  CHECK(c1(1) == 0);
}
