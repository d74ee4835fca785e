#pragma once
// Flat-sectioned key-value config files and their translation into typed
// experiment settings.
//
// Format: `[section]` headers, `key = value` lines, `#` or `;` comments,
// blank lines ignored.  Sections used here:
//   [environment]  variant, M, p, profile, states, matrix, window
//   [experiment]   replicas, horizon, right_threshold, return_cutoff,
//                  seed, threads
//   [verify]       window (lo:hi), depth, max_xyl, horizon
//   [sweep]        specs (whitespace-separated M:p pairs)

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cookiewalk/cookie_env.hpp"
#include "cookiewalk/experiments.hpp"

namespace cookiewalk {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

// Typed lookups; every failure names section.key.
std::optional<std::string> config_get(const ConfigMap& cfg,
                                      const std::string& section,
                                      const std::string& key);
long config_long(const ConfigMap& cfg, const std::string& section,
                 const std::string& key, long fallback);
std::uint64_t config_u64(const ConfigMap& cfg, const std::string& section,
                         const std::string& key, std::uint64_t fallback);
double config_double(const ConfigMap& cfg, const std::string& section,
                     const std::string& key, double fallback);

// "lo:hi" -> {lo, hi}; throws ConfigError when malformed.
std::pair<long, long> parse_window(const std::string& text);

// The [environment] section, if present.
std::optional<EnvFamilySpec> parse_env_spec(const ConfigMap& cfg);

// The [sweep] specs list ("M:p M:p ..."), if present.
std::optional<std::vector<EnvFamilySpec>> parse_sweep_specs(
    const ConfigMap& cfg);

// ExperimentConfig assembled from [environment] + [experiment], starting
// from the given defaults.
ExperimentConfig parse_experiment_config(const ConfigMap& cfg,
                                         ExperimentConfig defaults);

}  // namespace cookiewalk
