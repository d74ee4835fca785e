#include "cookiewalk/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "cookiewalk/rng.hpp"
#include "cookiewalk/zproc.hpp"

namespace cookiewalk {

namespace {

constexpr long kSweepUBudget = 100000;

void record_violation(CheckReport& rep, const ArrowTable& table,
                      const std::string& details) {
  ++rep.violations;
  if (rep.first_counterexample.empty()) {
    rep.first_counterexample = table.serialize() + details + "\n";
  }
}

double profile_value(const std::vector<double>& profile, long k) {
  if (k <= static_cast<long>(profile.size())) {
    return profile[static_cast<std::size_t>(k - 1)];
  }
  return 0.5;
}

}  // namespace

std::string CheckReport::line() const {
  std::ostringstream os;
  os << name << ' ' << examined << ' ' << applicable << ' ' << violations;
  return os.str();
}

long for_each_table(long x_lo, long x_hi, int depth,
                    const std::function<void(const ArrowTable&)>& fn,
                    int max_bits) {
  if (x_hi < x_lo) throw UsageError("table window is empty");
  if (depth < 1) throw UsageError("table depth must be positive");
  const long bits = (x_hi - x_lo + 1) * depth;
  if (bits > max_bits) {
    std::ostringstream os;
    os << "enumeration would need " << bits << " bits per table, above the "
       << max_bits << "-bit guard";
    throw UsageError(os.str());
  }
  const std::uint64_t count = std::uint64_t{1} << bits;
  for (std::uint64_t code = 0; code < count; ++code) {
    fn(ArrowTable::from_code(x_lo, x_hi, depth, code));
  }
  return static_cast<long>(count);
}

FateReport classify_table(const ArrowEnvironment& a, long x_hi, long horizon) {
  StopRule stop;
  stop.targets = {-1, x_hi + 1};
  stop.horizon = horizon;
  FateReport rep;
  rep.trace = run_walk(a, 0, stop);
  if (rep.trace.termination == WalkTrace::Termination::hit_target) {
    rep.fate = rep.trace.hit_site == -1 ? TableFate::hits_minus_one
                                        : TableFate::escapes_right;
  } else {
    rep.fate = TableFate::undetermined;
  }
  return rep;
}

CheckReport check_z_equals_w(long x_lo, long x_hi, int depth, long horizon) {
  CheckReport rep;
  rep.name = "z_equals_w";
  for_each_table(x_lo, x_hi, depth, [&](const ArrowTable& table) {
    ++rep.examined;
    const ArrowEnvironment a = ArrowEnvironment::from_table(table);
    const FateReport fate = classify_table(a, x_hi, horizon);
    if (fate.fate == TableFate::undetermined) return;
    ++rep.applicable;
    if (fate.fate == TableFate::hits_minus_one) {
      const long top = *max_before_hit(fate.trace) + 1;
      const std::vector<long> w = crossings(fate.trace, fate.trace.hit_step);
      const ZRun z = z_run(a, ZDirection::plus, 1, top, kSweepUBudget);
      for (long n = 0; n <= top; ++n) {
        const long wn =
            n < static_cast<long>(w.size()) ? w[static_cast<std::size_t>(n)]
                                            : 0;
        if (z.value_at(n) != wn) {
          std::ostringstream os;
          os << "finite case: Z_" << n << "=" << z.value_at(n) << " W_" << n
             << "=" << wn;
          record_violation(rep, table, os.str());
          return;
        }
      }
    } else {
      const long top = x_hi + 1;
      const std::vector<long> w = crossings(fate.trace, fate.trace.steps());
      const ZRun z = z_run(a, ZDirection::plus, 1, top, kSweepUBudget);
      for (long n = 0; n <= top; ++n) {
        const long wn =
            n < static_cast<long>(w.size()) ? w[static_cast<std::size_t>(n)]
                                            : 0;
        const long zn = z.status == ZRun::Status::budget_exhausted_in_u &&
                                n >= static_cast<long>(z.values.size())
                            ? -1
                            : z.value_at(n);
        if (zn < wn) {
          std::ostringstream os;
          os << "escape case: Z_" << n << "=" << zn << " W_" << n << "=" << wn;
          record_violation(rep, table, os.str());
          return;
        }
      }
    }
  });
  return rep;
}

CheckReport check_survival_equivalence(long x_lo, long x_hi, int depth,
                                       long horizon) {
  CheckReport rep;
  rep.name = "survival_equivalence";
  // Once Z+ consults columns beyond the window edge it is looking at
  // out-of-window columns, on which the transform is the identity; x_hi + 2
  // steps therefore decide extinction exactly.
  const long steps = x_hi + 2;
  for_each_table(x_lo, x_hi, depth, [&](const ArrowTable& table) {
    ++rep.examined;
    const ArrowEnvironment a = ArrowEnvironment::from_table(table);
    const FateReport fate = classify_table(a, x_hi, horizon);
    if (fate.fate == TableFate::undetermined) return;
    ++rep.applicable;
    const ZRun z = z_run(a, ZDirection::plus, 1, steps, kSweepUBudget);
    const bool extinct = z.status == ZRun::Status::extinct_at;
    const bool hits = fate.fate == TableFate::hits_minus_one;
    if (hits != extinct) {
      std::ostringstream os;
      os << (hits ? "walk hits -1 but Z+ stays alive"
                  : "walk escapes right but Z+ dies");
      record_violation(rep, table, os.str());
    }
  });
  return rep;
}

CheckReport check_tau_eq_m_plus_one(long x_lo, long x_hi, int depth,
                                    long horizon) {
  CheckReport rep;
  rep.name = "tau_eq_m_plus_one";
  for_each_table(x_lo, x_hi, depth, [&](const ArrowTable& table) {
    ++rep.examined;
    const ArrowEnvironment a = ArrowEnvironment::from_table(table);
    const FateReport fate = classify_table(a, x_hi, horizon);
    if (fate.fate != TableFate::hits_minus_one) return;
    ++rep.applicable;
    const long m = *max_before_hit(fate.trace);
    const ZRun z = z_run(a, ZDirection::plus, 1, x_hi + 2, kSweepUBudget);
    const auto tau = extinction_time(z);
    if (!tau || *tau != m + 1) {
      std::ostringstream os;
      os << "M=" << m << " tau="
         << (tau ? std::to_string(*tau) : std::string("none"));
      record_violation(rep, table, os.str());
    }
  });
  return rep;
}

CheckReport check_crossing_remark(long x_lo, long x_hi, int depth,
                                  long horizon) {
  CheckReport rep;
  rep.name = "crossing_remark";
  for_each_table(x_lo, x_hi, depth, [&](const ArrowTable& table) {
    ++rep.examined;
    const ArrowEnvironment a = ArrowEnvironment::from_table(table);
    const FateReport fate = classify_table(a, x_hi, horizon);
    if (fate.fate == TableFate::undetermined) return;
    ++rep.applicable;
    const bool hits = fate.fate == TableFate::hits_minus_one;
    const long cut = hits ? fate.trace.hit_step : fate.trace.steps();
    const long top = hits ? *max_before_hit(fate.trace) + 1 : x_hi + 1;
    const std::vector<long> right = crossings(fate.trace, cut);
    const std::vector<long> left = left_crossings(fate.trace, cut);
    auto at = [](const std::vector<long>& v, long n) {
      return n < static_cast<long>(v.size()) ? v[static_cast<std::size_t>(n)]
                                             : 0;
    };
    for (long n = 1; n <= top; ++n) {
      const long want = hits ? at(left, n) : at(left, n) + 1;
      if (at(right, n) != want) {
        std::ostringstream os;
        os << (hits ? "finite" : "escape") << " case: n=" << n
           << " right=" << at(right, n) << " left=" << at(left, n);
        record_violation(rep, table, os.str());
        return;
      }
    }
  });
  return rep;
}

CheckReport check_u_properties(int depth) {
  if (depth < 1 || depth > 20) {
    throw UsageError("U property sweeps support depths 1..20");
  }
  CheckReport rep;
  rep.name = "u_properties";
  const long budget = 10L * depth + 100;
  const long x_max = depth + 2;
  const std::uint64_t count = std::uint64_t{1} << depth;
  for (std::uint64_t code = 0; code < count; ++code) {
    const Column b = table_column(code, depth);
    auto up = [&](long x) { return u_plus(b, x, budget); };
    auto um = [&](long x) { return u_minus(b, x, budget); };
    auto describe = [&](const std::string& what, long x) {
      std::ostringstream os;
      os << "column code " << code << " depth " << depth << ": " << what
         << " at x=" << x << "\n";
      ++rep.violations;
      if (rep.first_counterexample.empty()) rep.first_counterexample = os.str();
    };
    for (long x = 0; x <= x_max; ++x) {
      // Monotonicity of both transforms across the step x -> x + 1.
      rep.examined += 2;
      rep.applicable += 2;
      if (!(up(x).value <= up(x + 1).value)) describe("U+ not monotone", x);
      if (!(um(x).value <= um(x + 1).value)) describe("U- not monotone", x);
      // Strict composition bounds, defined for x >= 1.
      rep.examined += 2;
      if (x >= 1) {
        rep.applicable += 2;
        if (!(up(um(x).value).value < x)) describe("U+ o U- >= x", x);
        if (!(um(up(x).value).value < x)) describe("U- o U+ >= x", x);
      }
    }
  }
  return rep;
}

CheckReport check_subduality_sweep(long x_lo, long x_hi, int depth,
                                   long max_xyl, long u_budget) {
  if (max_xyl < 1) throw UsageError("subduality sweep needs max_xyl >= 1");
  CheckReport rep;
  rep.name = "subduality";
  for_each_table(x_lo, x_hi, depth, [&](const ArrowTable& table) {
    const ArrowEnvironment a = ArrowEnvironment::from_table(table);
    for (long x = 1; x <= max_xyl; ++x) {
      for (long l = 1; l <= max_xyl; ++l) {
        for (long y = 1; y <= max_xyl; ++y) {
          ++rep.examined;
          const SubdualityVerdict v = check_subduality(a, x, y, l, u_budget);
          if (v.kind == SubdualityVerdict::Kind::not_applicable) continue;
          ++rep.applicable;
          if (v.violated()) record_violation(rep, table, v.details);
        }
      }
    }
  });
  return rep;
}

CheckReport check_coupling_law(const std::vector<double>& profile,
                               long samples, long steps, std::uint64_t seed,
                               double threshold) {
  if (samples < 10000) {
    throw UsageError("the coupling-law comparison needs >= 10^4 samples");
  }
  if (steps < 1) throw UsageError("step count must be >= 1");
  for (double v : profile) {
    if (!(v > 0.0 && v < 1.0)) {
      throw UsageError("profile entries must lie strictly in (0,1)");
    }
  }
  CheckReport rep;
  rep.name = "coupling_law";

  const std::size_t span = static_cast<std::size_t>(2 * steps + 1);
  std::vector<long> direct_hist(span, 0);
  std::vector<long> coupled_hist(span, 0);
  const std::uint64_t direct_seed = rng::hash1(seed, 1);
  const std::uint64_t coupled_seed = rng::hash1(seed, 2);

  // Route 1: sample the walk directly from the cookies, one fresh uniform
  // per step.  This path never realizes an arrow environment.
  std::vector<int> cnt(span, 0);
  for (long s = 0; s < samples; ++s) {
    std::fill(cnt.begin(), cnt.end(), 0);
    long x = 0;
    for (long t = 0; t < steps; ++t) {
      const long k = ++cnt[static_cast<std::size_t>(x + steps)];
      const double p = profile_value(profile, k);
      const double u =
          rng::unit(rng::hash3(direct_seed, static_cast<std::uint64_t>(s),
                               static_cast<std::uint64_t>(t), 0));
      x += (u < p) ? 1 : -1;
    }
    ++direct_hist[static_cast<std::size_t>(x + steps)];
  }

  // Route 2: realize arrows from the same cookie profile, then walk on them.
  const CookieEnvironment env =
      build_environment(EnvFamilySpec::constant_profile_of(profile), 0);
  for (long s = 0; s < samples; ++s) {
    std::fill(cnt.begin(), cnt.end(), 0);
    const ArrowEnvironment a =
        realize(env, rng::hash1(coupled_seed, static_cast<std::uint64_t>(s)));
    long x = 0;
    for (long t = 0; t < steps; ++t) {
      const long k = ++cnt[static_cast<std::size_t>(x + steps)];
      x += a.arrow_at(x, k) ? 1 : -1;
    }
    ++coupled_hist[static_cast<std::size_t>(x + steps)];
  }

  double tv = 0.0;
  for (std::size_t i = 0; i < span; ++i) {
    tv += std::abs(static_cast<double>(direct_hist[i]) -
                   static_cast<double>(coupled_hist[i]));
  }
  tv /= 2.0 * static_cast<double>(samples);

  rep.examined = 2 * samples;
  rep.applicable = 2 * samples;
  rep.violations = tv <= threshold ? 0 : 1;
  std::ostringstream os;
  os << "tv=" << tv << " threshold=" << threshold;
  rep.note = os.str();
  if (rep.violations) rep.first_counterexample = rep.note + "\n";
  return rep;
}

}  // namespace cookiewalk
