#include "cookiewalk/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cookiewalk {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value, const std::string& want) {
  throw ConfigError("config field " + section + "." + key + " = '" + value +
                    "' is not " + want);
}

long to_long(const std::string& section, const std::string& key,
             const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    bad_value(section, key, value, "an integer");
  }
}

std::uint64_t to_u64(const std::string& section, const std::string& key,
                     const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    bad_value(section, key, value, "an unsigned integer");
  }
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    bad_value(section, key, value, "a number");
  }
}

std::vector<double> to_doubles(const std::string& section,
                               const std::string& key,
                               const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(section, key, tok));
  if (out.empty()) bad_value(section, key, value, "a list of numbers");
  return out;
}

// "a b | c d" -> {{a, b}, {c, d}}
std::vector<std::vector<double>> to_rows(const std::string& section,
                                         const std::string& key,
                                         const std::string& value) {
  std::vector<std::vector<double>> rows;
  std::string chunk;
  std::istringstream in(value);
  while (std::getline(in, chunk, '|')) {
    rows.push_back(to_doubles(section, key, chunk));
  }
  if (rows.empty()) bad_value(section, key, value, "a '|'-separated matrix");
  return rows;
}

std::string require_get(const ConfigMap& cfg, const std::string& section,
                        const std::string& key, const std::string& context) {
  const auto v = config_get(cfg, section, key);
  if (!v) {
    throw ConfigError("config field " + section + "." + key +
                      " is required for " + context);
  }
  return *v;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Comments run to the end of the line; values never contain '#' or ';'.
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header '" + t + "'");
      }
      section = trim(t.substr(1, t.size() - 2));
      cfg[section];  // remember even empty sections
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key '" +
                        key + "' appears before any [section]");
    }
    cfg[section][key] = value;
  }
  return cfg;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::optional<std::string> config_get(const ConfigMap& cfg,
                                      const std::string& section,
                                      const std::string& key) {
  const auto s = cfg.find(section);
  if (s == cfg.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

long config_long(const ConfigMap& cfg, const std::string& section,
                 const std::string& key, long fallback) {
  const auto v = config_get(cfg, section, key);
  return v ? to_long(section, key, *v) : fallback;
}

std::uint64_t config_u64(const ConfigMap& cfg, const std::string& section,
                         const std::string& key, std::uint64_t fallback) {
  const auto v = config_get(cfg, section, key);
  return v ? to_u64(section, key, *v) : fallback;
}

double config_double(const ConfigMap& cfg, const std::string& section,
                     const std::string& key, double fallback) {
  const auto v = config_get(cfg, section, key);
  return v ? to_double(section, key, *v) : fallback;
}

std::pair<long, long> parse_window(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("window must be 'lo:hi', got '" + text + "'");
  }
  try {
    std::size_t pos = 0;
    const long lo = std::stol(text.substr(0, colon), &pos);
    if (pos != colon) throw std::invalid_argument(text);
    const std::string rest = text.substr(colon + 1);
    const long hi = std::stol(rest, &pos);
    if (pos != rest.size()) throw std::invalid_argument(text);
    if (hi < lo) throw ConfigError("window '" + text + "' is empty");
    return {lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("window must be 'lo:hi', got '" + text + "'");
  }
}

std::optional<EnvFamilySpec> parse_env_spec(const ConfigMap& cfg) {
  const auto variant = config_get(cfg, "environment", "variant");
  if (!variant) {
    if (cfg.count("environment")) {
      throw ConfigError("config field environment.variant is required when "
                        "an [environment] section is present");
    }
    return std::nullopt;
  }
  const std::string& v = *variant;
  if (v == "single_cookie") {
    return EnvFamilySpec::single_cookie(to_double(
        "environment", "p", require_get(cfg, "environment", "p", v)));
  }
  if (v == "iid_bounded") {
    return EnvFamilySpec::iid_bounded(
        static_cast<int>(to_long("environment", "M",
                                 require_get(cfg, "environment", "M", v))),
        to_double("environment", "p",
                  require_get(cfg, "environment", "p", v)));
  }
  if (v == "constant_profile") {
    const auto profile = config_get(cfg, "environment", "profile");
    if (!profile) {
      throw ConfigError(
          "config field environment.profile is required for "
          "constant_profile");
    }
    return EnvFamilySpec::constant_profile_of(
        to_doubles("environment", "profile", *profile));
  }
  if (v == "markov_modulated") {
    const auto states = config_get(cfg, "environment", "states");
    const auto matrix = config_get(cfg, "environment", "matrix");
    if (!states || !matrix) {
      throw ConfigError(
          "config fields environment.states and environment.matrix are "
          "required for markov_modulated");
    }
    return EnvFamilySpec::markov_modulated(
        to_rows("environment", "states", *states),
        to_rows("environment", "matrix", *matrix),
        config_long(cfg, "environment", "window", 0));
  }
  bad_value("environment", "variant", v,
            "one of single_cookie, iid_bounded, constant_profile, "
            "markov_modulated");
}

std::optional<std::vector<EnvFamilySpec>> parse_sweep_specs(
    const ConfigMap& cfg) {
  const auto specs = config_get(cfg, "sweep", "specs");
  if (!specs) return std::nullopt;
  std::vector<EnvFamilySpec> out;
  std::istringstream in(*specs);
  std::string tok;
  while (in >> tok) {
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos) {
      bad_value("sweep", "specs", tok, "an M:p pair");
    }
    const long m = to_long("sweep", "specs", tok.substr(0, colon));
    const double p = to_double("sweep", "specs", tok.substr(colon + 1));
    out.push_back(EnvFamilySpec::iid_bounded(static_cast<int>(m), p));
  }
  if (out.empty()) bad_value("sweep", "specs", *specs, "a list of M:p pairs");
  return out;
}

ExperimentConfig parse_experiment_config(const ConfigMap& cfg,
                                         ExperimentConfig defaults) {
  ExperimentConfig out = defaults;
  if (const auto env = parse_env_spec(cfg)) out.env = *env;
  out.replicas = config_long(cfg, "experiment", "replicas", out.replicas);
  out.horizon = config_long(cfg, "experiment", "horizon", out.horizon);
  out.right_threshold =
      config_long(cfg, "experiment", "right_threshold", out.right_threshold);
  out.return_cutoff =
      config_long(cfg, "experiment", "return_cutoff", out.return_cutoff);
  out.master_seed = config_u64(cfg, "experiment", "seed", out.master_seed);
  out.threads = static_cast<int>(
      config_long(cfg, "experiment", "threads", out.threads));
  return out;
}

}  // namespace cookiewalk
