#pragma once
// Cookie environments: lazy maps (site, visit index) -> probability.
//
// The walker's n-th visit to site x steps right with probability
// cookie_at(x, n).  Four built-in families cover the cases the test suite
// exercises: a single biased first visit, an i.i.d.-style bounded stack of
// equal cookies, an arbitrary constant per-site profile, and a Markov-
// modulated family whose per-site profile is chosen by an ergodic chain
// indexed by the site.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cookiewalk {

// Construction-time contract violation (bad probabilities, bad matrix, ...).
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller-side misuse of an accessor (e.g. visit index 0).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EnvFamilySpec {
  enum class Kind {
    iid_bounded,       // M cookies of strength p, then fair coins
    single_cookie,     // one cookie of strength p, then fair coins
    markov_modulated,  // per-site profile selected by a site-indexed chain
    constant_profile,  // explicit profile at every site, then fair coins
  };

  Kind kind = Kind::single_cookie;

  // iid_bounded / single_cookie
  int stack_size = 0;  // M
  double p = 0.5;

  // constant_profile
  std::vector<double> profile;

  // markov_modulated
  std::vector<std::vector<double>> state_profiles;  // one profile per state
  std::vector<std::vector<double>> transition;      // row-stochastic matrix
  long window = 0;  // states are materialized on sites [-window, window]

  static EnvFamilySpec iid_bounded(int M, double p);
  static EnvFamilySpec single_cookie(double p);
  static EnvFamilySpec constant_profile_of(std::vector<double> profile);
  static EnvFamilySpec markov_modulated(
      std::vector<std::vector<double>> state_profiles,
      std::vector<std::vector<double>> transition, long window);

  // Returns a copy with the Markov materialization window enlarged to at
  // least `window`; no-op for the other families.
  EnvFamilySpec with_window_at_least(long window) const;

  // Throws ConstructionError naming the violated invariant.
  void validate() const;

  std::string describe() const;
};

// Stationary distribution of a validated row-stochastic matrix, by damped
// power iteration to relative tolerance 1e-12.
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& transition);

class CookieEnvironment {
 public:
  CookieEnvironment(EnvFamilySpec spec, std::uint64_t master_seed);

  // Probability of a right step on the n-th visit to site x (n >= 1).
  double cookie_at(long x, long n) const;

  const EnvFamilySpec& family() const { return spec_; }
  std::uint64_t master_seed() const { return seed_; }

  // Markov families only: the materialized chain state at site x.
  int state_at(long x) const;

 private:
  EnvFamilySpec spec_;
  std::uint64_t seed_ = 0;
  std::vector<int> states_;  // Markov families: state per site in the window
};

CookieEnvironment build_environment(const EnvFamilySpec& spec,
                                    std::uint64_t seed);

// Expected total drift stored in one column: sum over the profile of
// (2 p_i - 1), averaged over states for the Markov family.
double delta_of(const EnvFamilySpec& spec);

}  // namespace cookiewalk
