#pragma once
// Arrow environments: realized 0/1 instruction tapes over (site, visit index).
//
// An arrow environment assigns a bit to every (x, n): 1 means "step right on
// the n-th visit to x".  Environments come from three sources:
//   * realizing a cookie environment against keyed uniforms (arrow = 1 iff
//     uniform < cookie, strict),
//   * an explicit finite table with a mandatory alternating tail, or
//   * an arbitrary pure function (test doubles, column sweeps).
// Shift and reflection are represented as cheap coordinate transforms over a
// shared immutable source, so composing them never copies bit data.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cookiewalk/cookie_env.hpp"

namespace cookiewalk {

// Realization threshold: strict inequality, so a tie yields a left arrow.
constexpr int arrow_bit(double u, double cookie) { return u < cookie ? 1 : 0; }

// Explicit finite bit table over a site window, with deterministic column
// continuations:
//   * inside the window, beyond `depth` the column continues 0,1,0,1,...
//     (so visit depth+1 reads 0), which keeps every column non-degenerate;
//   * outside the window, columns read 1,0,1,0,... (first visit steps
//     right), so a walker that leaves the window to the right marches to
//     +infinity deterministically and never re-enters.
struct ArrowTable {
  long x_lo = 0;
  long x_hi = 0;
  int depth = 1;
  std::vector<std::vector<std::uint8_t>> bits;  // bits[x - x_lo][n - 1]

  // Decodes a table from the low (sites * depth) bits of `code`; bit
  // (site_index * depth + d) is the arrow for visit d+1 at site x_lo +
  // site_index.  Enumerating code = 0 .. 2^bits - 1 visits every table once.
  static ArrowTable from_code(long x_lo, long x_hi, int depth,
                              std::uint64_t code);

  int at(long x, long n) const;
  long sites() const { return x_hi - x_lo + 1; }

  // One line per site, ascending: "x: b1 b2 ... bD".
  std::string serialize() const;
  static ArrowTable parse(std::istream& in);
  static ArrowTable parse_string(const std::string& text);
};

class ArrowEnvironment {
 public:
  enum class Nondegeneracy { certified, not_certified };

  static ArrowEnvironment from_table(ArrowTable table);
  static ArrowEnvironment from_function(std::function<int(long, long)> fn);

  // The bit at (x, n), n >= 1, after applying reflection and shift.
  int arrow_at(long x, long n) const;

  // b = shift(z) satisfies b(x, n) = (*this)(x + z, n).
  ArrowEnvironment shift(long z) const;

  // b = reflect() satisfies b(x, n) = 1 - (*this)(-x, n).
  ArrowEnvironment reflect() const;

  // certified iff some i <= budget - 1 has a(x,i) != a(x,i+1); a negative
  // answer is a budget statement, not a proof of degeneracy.
  Nondegeneracy nondegenerate_within(long x, long budget) const;

  // The backing table when this environment is an untransformed table view
  // (used by counterexample reports); null otherwise.
  const ArrowTable* table() const;

 private:
  struct Source;
  ArrowEnvironment(std::shared_ptr<const Source> src, long offset,
                   bool reflected);

  std::shared_ptr<const Source> src_;
  long offset_ = 0;
  bool reflected_ = false;

  friend ArrowEnvironment realize(const CookieEnvironment& env,
                                  std::uint64_t uniform_seed);
};

// Thresholds the cookie environment against uniforms keyed by
// (uniform_seed, x, n):  arrow(x, n) = 1 iff u(x, n) < cookie_at(x, n).
ArrowEnvironment realize(const CookieEnvironment& env,
                         std::uint64_t uniform_seed);

inline int arrow_at(const ArrowEnvironment& a, long x, long n) {
  return a.arrow_at(x, n);
}
inline ArrowEnvironment shift(const ArrowEnvironment& a, long z) {
  return a.shift(z);
}
inline ArrowEnvironment reflect(const ArrowEnvironment& a) {
  return a.reflect();
}

}  // namespace cookiewalk
