#include "cookiewalk/cookie_env.hpp"

#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>

#include "cookiewalk/rng.hpp"

namespace cookiewalk {

namespace {

void require_probability(double v, const std::string& what) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << what << " must lie strictly in (0,1), got " << v;
    throw ConstructionError(os.str());
  }
}

void require_profile(const std::vector<double>& profile,
                     const std::string& what) {
  if (profile.empty()) {
    throw ConstructionError(what + " must be non-empty");
  }
  for (double v : profile) require_probability(v, what + " entry");
}

// Strong connectivity of the support graph of the matrix: every state
// reaches state 0 and is reached from it.
bool irreducible(const std::vector<std::vector<double>>& m) {
  const std::size_t k = m.size();
  auto reach = [&](bool forward) {
    std::vector<char> seen(k, 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      std::size_t s = q.front();
      q.pop();
      for (std::size_t t = 0; t < k; ++t) {
        double w = forward ? m[s][t] : m[t][s];
        if (w > 0.0 && !seen[t]) {
          seen[t] = 1;
          q.push(t);
        }
      }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  return reach(true) && reach(false);
}

// Index of the first CDF bucket of `weights` that u falls into.
int inverse_cdf(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

double profile_value(const std::vector<double>& profile, long n) {
  if (n <= static_cast<long>(profile.size())) {
    return profile[static_cast<std::size_t>(n - 1)];
  }
  return 0.5;
}

double column_drift(const std::vector<double>& profile) {
  double d = 0.0;
  for (double v : profile) d += 2.0 * v - 1.0;
  return d;
}

}  // namespace

EnvFamilySpec EnvFamilySpec::iid_bounded(int M, double p) {
  EnvFamilySpec s;
  s.kind = Kind::iid_bounded;
  s.stack_size = M;
  s.p = p;
  return s;
}

EnvFamilySpec EnvFamilySpec::single_cookie(double p) {
  EnvFamilySpec s;
  s.kind = Kind::single_cookie;
  s.stack_size = 1;
  s.p = p;
  return s;
}

EnvFamilySpec EnvFamilySpec::constant_profile_of(std::vector<double> profile) {
  EnvFamilySpec s;
  s.kind = Kind::constant_profile;
  s.profile = std::move(profile);
  return s;
}

EnvFamilySpec EnvFamilySpec::markov_modulated(
    std::vector<std::vector<double>> state_profiles,
    std::vector<std::vector<double>> transition, long window) {
  EnvFamilySpec s;
  s.kind = Kind::markov_modulated;
  s.state_profiles = std::move(state_profiles);
  s.transition = std::move(transition);
  s.window = window;
  return s;
}

EnvFamilySpec EnvFamilySpec::with_window_at_least(long window) const {
  EnvFamilySpec s = *this;
  if (s.kind == Kind::markov_modulated && s.window < window) {
    s.window = window;
  }
  return s;
}

void EnvFamilySpec::validate() const {
  switch (kind) {
    case Kind::iid_bounded:
      if (stack_size < 1) {
        throw ConstructionError("cookie stack size must be a positive integer");
      }
      require_probability(p, "cookie strength");
      return;
    case Kind::single_cookie:
      require_probability(p, "cookie strength");
      return;
    case Kind::constant_profile:
      require_profile(profile, "profile");
      return;
    case Kind::markov_modulated: {
      if (state_profiles.empty()) {
        throw ConstructionError("state profile list must be non-empty");
      }
      for (const auto& prof : state_profiles) {
        require_profile(prof, "state profile");
      }
      if (transition.size() != state_profiles.size()) {
        throw ConstructionError(
            "transition matrix must have one row per state profile");
      }
      for (const auto& row : transition) {
        if (row.size() != transition.size()) {
          throw ConstructionError("transition matrix must be square");
        }
        double sum = 0.0;
        for (double v : row) {
          if (v < 0.0) {
            throw ConstructionError(
                "transition matrix entries must be non-negative");
          }
          sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
          std::ostringstream os;
          os << "transition matrix row sums to " << sum
             << ", must be 1 within 1e-12";
          throw ConstructionError(os.str());
        }
      }
      if (!irreducible(transition)) {
        throw ConstructionError("transition matrix must be irreducible");
      }
      if (window < 0) {
        throw ConstructionError("materialization window must be non-negative");
      }
      return;
    }
  }
  throw ConstructionError("unknown environment family");
}

std::string EnvFamilySpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::iid_bounded:
      os << "iid_bounded(M=" << stack_size << ", p=" << p << ")";
      break;
    case Kind::single_cookie:
      os << "single_cookie(p=" << p << ")";
      break;
    case Kind::constant_profile: {
      os << "constant_profile([";
      for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i) os << ", ";
        os << profile[i];
      }
      os << "])";
      break;
    }
    case Kind::markov_modulated:
      os << "markov_modulated(states=" << state_profiles.size()
         << ", window=" << window << ")";
      break;
  }
  return os.str();
}

std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& transition) {
  const std::size_t k = transition.size();
  std::vector<double> v(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k, 0.0);
  // Damped iteration v <- v (P + I)/2 kills periodicity without moving the
  // fixed point.
  for (int iter = 0; iter < 200000; ++iter) {
    for (std::size_t t = 0; t < k; ++t) next[t] = 0.5 * v[t];
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t t = 0; t < k; ++t) {
        next[t] += 0.5 * v[s] * transition[s][t];
      }
    }
    double norm = 0.0;
    for (double x : next) norm += x;
    for (double& x : next) x /= norm;
    double diff = 0.0;
    for (std::size_t t = 0; t < k; ++t) diff += std::abs(next[t] - v[t]);
    v.swap(next);
    if (diff < 1e-12) break;
  }
  return v;
}

CookieEnvironment::CookieEnvironment(EnvFamilySpec spec,
                                     std::uint64_t master_seed)
    : spec_(std::move(spec)), seed_(master_seed) {
  spec_.validate();
  if (spec_.kind != EnvFamilySpec::Kind::markov_modulated) return;

  // Materialize the chain across [-window, window]: the leftmost site is
  // drawn from the stationary law, every site after it by one transition
  // step.  Each site consumes the uniform variate keyed to it, so the whole
  // assignment is a pure function of (seed, site window).
  const std::vector<double> pi = stationary_distribution(spec_.transition);
  const long w = spec_.window;
  states_.resize(static_cast<std::size_t>(2 * w + 1));
  int state = inverse_cdf(pi, rng::uniform_at(seed_, -w, 1));
  states_[0] = state;
  for (long x = -w + 1; x <= w; ++x) {
    state = inverse_cdf(spec_.transition[static_cast<std::size_t>(state)],
                        rng::uniform_at(seed_, x, 1));
    states_[static_cast<std::size_t>(x + w)] = state;
  }
}

int CookieEnvironment::state_at(long x) const {
  if (spec_.kind != EnvFamilySpec::Kind::markov_modulated) {
    throw UsageError("state_at is only defined for Markov-modulated families");
  }
  const long w = spec_.window;
  if (x < -w || x > w) {
    std::ostringstream os;
    os << "site " << x << " lies outside the materialized window [-" << w
       << ", " << w << "]";
    throw UsageError(os.str());
  }
  return states_[static_cast<std::size_t>(x + w)];
}

double CookieEnvironment::cookie_at(long x, long n) const {
  if (n < 1) {
    throw UsageError("visit indices are 1-based; got index " +
                     std::to_string(n));
  }
  switch (spec_.kind) {
    case EnvFamilySpec::Kind::single_cookie:
      return n == 1 ? spec_.p : 0.5;
    case EnvFamilySpec::Kind::iid_bounded:
      return n <= spec_.stack_size ? spec_.p : 0.5;
    case EnvFamilySpec::Kind::constant_profile:
      return profile_value(spec_.profile, n);
    case EnvFamilySpec::Kind::markov_modulated: {
      const int s = state_at(x);
      return profile_value(spec_.state_profiles[static_cast<std::size_t>(s)],
                           n);
    }
  }
  throw UsageError("unknown environment family");
}

CookieEnvironment build_environment(const EnvFamilySpec& spec,
                                    std::uint64_t seed) {
  return CookieEnvironment(spec, seed);
}

double delta_of(const EnvFamilySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case EnvFamilySpec::Kind::iid_bounded:
      return static_cast<double>(spec.stack_size) * (2.0 * spec.p - 1.0);
    case EnvFamilySpec::Kind::single_cookie:
      return 2.0 * spec.p - 1.0;
    case EnvFamilySpec::Kind::constant_profile:
      return column_drift(spec.profile);
    case EnvFamilySpec::Kind::markov_modulated: {
      const std::vector<double> pi = stationary_distribution(spec.transition);
      double d = 0.0;
      for (std::size_t s = 0; s < pi.size(); ++s) {
        d += pi[s] * column_drift(spec.state_profiles[s]);
      }
      return d;
    }
  }
  throw ConstructionError(
      "the column drift parameter is undefined for this family");
}

}  // namespace cookiewalk
