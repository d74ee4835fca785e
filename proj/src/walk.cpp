#include "cookiewalk/walk.hpp"

#include <algorithm>
#include <sstream>

namespace cookiewalk {

namespace {

bool is_target(const std::vector<long>& targets, long x) {
  for (long t : targets)
    if (t == x) return true;
  return false;
}

}  // namespace

WalkTrace run_walk(const ArrowEnvironment& a, long start,
                   const StopRule& stop) {
  if (stop.horizon < 1) throw UsageError("walk horizon must be >= 1");
  WalkTrace tr;
  tr.start = start;
  tr.horizon = stop.horizon;
  tr.positions.reserve(
      static_cast<std::size_t>(std::min<long>(stop.horizon, 1 << 20)) + 1);
  tr.positions.push_back(start);
  for (long t = 0;; ++t) {
    const long x = tr.positions.back();
    if (is_target(stop.targets, x)) {
      tr.termination = WalkTrace::Termination::hit_target;
      tr.hit_site = x;
      tr.hit_step = t;
      return tr;
    }
    if (stop.window && (x < stop.window->first || x > stop.window->second)) {
      tr.termination = WalkTrace::Termination::left_window;
      tr.hit_step = t;
      return tr;
    }
    if (t == stop.horizon) {
      tr.termination = WalkTrace::Termination::horizon_exhausted;
      return tr;
    }
    const long k = ++tr.consumption[x];
    const int bit = a.arrow_at(x, k);
    tr.positions.push_back(x + (bit ? 1 : -1));
  }
}

HittingReport hitting_time(const WalkTrace& trace, long m) {
  HittingReport r;
  r.target = m;
  r.horizon = trace.horizon;
  for (std::size_t t = 0; t < trace.positions.size(); ++t) {
    if (trace.positions[t] == m) {
      r.hit = true;
      r.step = static_cast<long>(t);
      return r;
    }
  }
  return r;
}

namespace {

std::vector<long> count_crossings(const WalkTrace& trace, long up_to,
                                  bool rightward) {
  if (up_to < 0 || up_to > trace.steps()) {
    throw UsageError("crossing cut-off must lie within the trace");
  }
  long max_pos = 0;
  for (long t = 0; t <= up_to; ++t) {
    max_pos = std::max(max_pos, trace.positions[static_cast<std::size_t>(t)]);
  }
  std::vector<long> w(static_cast<std::size_t>(max_pos) + 2, 0);
  if (rightward) w[0] = 1;  // W_0 = 1 by convention
  for (long t = 0; t < up_to; ++t) {
    const long a = trace.positions[static_cast<std::size_t>(t)];
    const long b = trace.positions[static_cast<std::size_t>(t + 1)];
    // Edge {n-1, n} is crossed rightward by a step n-1 -> n and leftward by
    // a step n -> n-1; only edges with n >= 1 are counted.
    const long n = rightward ? b : a;
    if (((rightward && b == a + 1) || (!rightward && b == a - 1)) && n >= 1) {
      ++w[static_cast<std::size_t>(n)];
    }
  }
  return w;
}

}  // namespace

std::vector<long> crossings(const WalkTrace& trace, long up_to) {
  return count_crossings(trace, up_to, true);
}

std::vector<long> left_crossings(const WalkTrace& trace, long up_to) {
  return count_crossings(trace, up_to, false);
}

std::optional<long> max_before_hit(const WalkTrace& trace) {
  const HittingReport r = hitting_time(trace, -1);
  if (!r.hit || r.step == 0) return std::nullopt;
  long m = trace.positions[0];
  for (long t = 0; t < r.step; ++t) {
    m = std::max(m, trace.positions[static_cast<std::size_t>(t)]);
  }
  return m;
}

std::vector<Excursion> right_excursions(const WalkTrace& trace) {
  if (trace.positions.empty() || trace.positions[0] != 0) {
    throw UsageError("excursion accounting requires a walk started at 0");
  }
  std::vector<Excursion> out;
  const long last = trace.steps();
  long t = 0;
  while (t < last) {
    if (trace.positions[static_cast<std::size_t>(t)] == 0 &&
        trace.positions[static_cast<std::size_t>(t + 1)] == 1) {
      Excursion e;
      e.begin_step = t;
      long u = t + 1;
      while (u <= last && trace.positions[static_cast<std::size_t>(u)] > 0) {
        ++u;
      }
      if (u <= last) {
        e.end_step = u;
        out.push_back(e);
        t = u;
      } else {
        out.push_back(e);  // open at the trace end
        break;
      }
    } else {
      ++t;
    }
  }
  return out;
}

std::map<long, RegenerationProbe> optional_regeneration_positions(
    const ArrowEnvironment& a, long m_lo, long m_hi, long horizon) {
  if (horizon < 1) throw UsageError("probe horizon must be >= 1");
  if (m_hi < m_lo) throw UsageError("probe range is empty");
  std::map<long, RegenerationProbe> out;
  for (long m = m_lo; m <= m_hi; ++m) {
    StopRule stop;
    stop.targets = {m - 1};
    stop.horizon = horizon;
    const WalkTrace tr = run_walk(a, m, stop);
    RegenerationProbe probe;
    probe.horizon = horizon;
    if (tr.termination == WalkTrace::Termination::hit_target) {
      probe.refuted = true;
      probe.step = tr.hit_step;
    }
    out.emplace(m, probe);
  }
  return out;
}

std::string dump_trace(const WalkTrace& trace) {
  std::ostringstream os;
  std::unordered_map<long, long> cnt;
  for (long t = 0; t < trace.steps(); ++t) {
    const long x = trace.positions[static_cast<std::size_t>(t)];
    const long k = ++cnt[x];
    const int bit =
        trace.positions[static_cast<std::size_t>(t + 1)] == x + 1 ? 1 : 0;
    os << t << ' ' << x << ' ' << k << ' ' << bit << '\n';
  }
  return os.str();
}

WalkSummary summarize_walk(const ArrowEnvironment& a, long horizon, long level,
                           bool stop_at_minus_one) {
  if (horizon < 1) throw UsageError("walk horizon must be >= 1");
  if (level < 1) throw UsageError("crossing level must be >= 1");
  WalkSummary s;
  // Visit counters as a flat array over the only sites reachable in
  // `horizon` steps from 0.
  std::vector<int> cnt(static_cast<std::size_t>(2 * horizon + 1), 0);
  const long off = horizon;
  long x = 0;
  for (long t = 1; t <= horizon; ++t) {
    const long k = ++cnt[static_cast<std::size_t>(x + off)];
    const int bit = a.arrow_at(x, k);
    const long nx = x + (bit ? 1 : -1);
    if (nx == 0) {
      ++s.returns;
      s.last_return = t;
    }
    if (nx == -1 && s.t_minus1 < 0) {
      s.t_minus1 = t;
      if (stop_at_minus_one) {
        s.steps = t;
        s.final_x = nx;
        s.max_x = std::max(s.max_x, nx);
        s.min_x = std::min(s.min_x, nx);
        return s;
      }
    }
    if (nx == level && x == level - 1) s.last_upcross = t;
    if (nx == -level && x == -level + 1) s.last_downcross = t;
    s.max_x = std::max(s.max_x, nx);
    s.min_x = std::min(s.min_x, nx);
    x = nx;
  }
  s.steps = horizon;
  s.final_x = x;
  return s;
}

}  // namespace cookiewalk
