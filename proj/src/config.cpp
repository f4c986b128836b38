#include "autohedge/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace autohedge {

namespace {

struct Raw {
  std::string text;  // value exactly as written
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double as_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) bad(key, "expected a number, got '" + v + "'");
  return x;
}

long as_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) bad(key, "expected a non-negative integer, got '" + v + "'");
  return x;
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad(key, "expected true or false, got '" + v + "'");
}

std::string as_string(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    bad(key, "expected a quoted string, got '" + v + "'");
  }
  return v.substr(1, v.size() - 2);
}

std::vector<int> as_int_list(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    bad(key, "expected a list like [256, 256], got '" + v + "'");
  }
  std::vector<int> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(as_long(key, item)));
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }
std::string fmt_str(const std::string& s) { return "\"" + s + "\""; }

std::string fmt_list(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& raw)> set;
};

#define AH_DOUBLE(name, expr)                                                                  \
  fields[name] = Field{[](const ExperimentConfig& c) { return fmt(c.expr); },                 \
                       [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
                         c.expr = as_double(k, v);                                            \
                       }}
#define AH_INT(name, expr)                                                                     \
  fields[name] = Field{[](const ExperimentConfig& c) { return std::to_string(c.expr); },       \
                       [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
                         c.expr = static_cast<decltype(c.expr)>(as_long(k, v));               \
                       }}
#define AH_U64(name, expr)                                                                     \
  fields[name] = Field{[](const ExperimentConfig& c) { return std::to_string(c.expr); },       \
                       [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
                         c.expr = as_u64(k, v);                                               \
                       }}
#define AH_BOOL(name, expr)                                                                    \
  fields[name] = Field{[](const ExperimentConfig& c) { return fmt(c.expr); },                 \
                       [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
                         c.expr = as_bool(k, v);                                              \
                       }}
#define AH_LIST(name, expr)                                                                    \
  fields[name] = Field{[](const ExperimentConfig& c) { return fmt_list(c.expr); },            \
                       [](ExperimentConfig& c, const std::string& k, const std::string& v) { \
                         c.expr = as_int_list(k, v);                                          \
                       }}

const std::map<std::string, Field>& registry() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> fields;
    AH_DOUBLE("market.spot0", market.spot0);
    AH_DOUBLE("market.mu", market.mu);
    AH_DOUBLE("market.sigma0", market.sigma0);
    AH_DOUBLE("market.beta", market.beta);
    AH_DOUBLE("market.rho", market.rho);
    AH_DOUBLE("market.nu", market.nu);

    AH_DOUBLE("note.initial_price", note.initial_price);
    AH_DOUBLE("note.term", note.term);
    AH_INT("note.coupon_frequency", note.coupon_frequency);
    AH_DOUBLE("note.coupon_rate", note.coupon_rate);
    AH_DOUBLE("note.coupon_barrier", note.coupon_barrier);
    AH_INT("note.autocall_frequency", note.autocall_frequency);
    AH_DOUBLE("note.call_barrier", note.call_barrier);
    AH_DOUBLE("note.protection_barrier", note.protection_barrier);
    AH_DOUBLE("note.notional", note.notional);

    fields["env.mode"] =
        Field{[](const ExperimentConfig& c) { return fmt_str(to_string(c.env.mode)); },
              [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                try {
                  c.env.mode = env_mode_from_string(as_string(k, v));
                } catch (const std::invalid_argument& e) {
                  bad(k, e.what());
                }
              }};
    fields["env.hedge_instrument"] = Field{
        [](const ExperimentConfig& c) { return fmt_str(to_string(c.env.hedge_instrument)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          try {
            c.env.hedge_instrument = hedge_instrument_from_string(as_string(k, v));
          } catch (const std::invalid_argument& e) {
            bad(k, e.what());
          }
        }};
    AH_DOUBLE("env.dt", env.dt);
    AH_DOUBLE("env.kappa", env.kappa);
    AH_DOUBLE("env.max_hedge_multiplier", env.max_hedge_multiplier);
    AH_DOUBLE("env.rate", env.rate);
    AH_DOUBLE("env.arrival_lambda", env.arrival_lambda);
    AH_DOUBLE("env.horizon", env.horizon);
    AH_BOOL("env.early_exercise", env.early_exercise);
    AH_DOUBLE("env.substep_dt", env.substep_dt);
    AH_DOUBLE("env.hedge_maturity", env.hedge_maturity);
    AH_DOUBLE("env.client_maturity", env.client_maturity);
    AH_DOUBLE("env.underlying_kappa", env.underlying_kappa);

    AH_INT("pricer.n_mc_paths", pricer.n_mc_paths);
    AH_DOUBLE("pricer.fd_bump_rel", pricer.fd_bump_rel);
    AH_INT("pricer.binomial_steps", pricer.binomial_steps);
    AH_INT("pricer.lsmc_basis_degree", pricer.lsmc_basis_degree);
    AH_INT("pricer.lsmc_training_paths", pricer.lsmc_training_paths);
    AH_DOUBLE("pricer.rate", pricer.rate);
    AH_BOOL("pricer.valuation_cache", pricer.valuation_cache);
    AH_DOUBLE("pricer.cache_log_spot_step", pricer.cache_log_spot_step);
    AH_DOUBLE("pricer.cache_log_vol_step", pricer.cache_log_vol_step);
    AH_INT("pricer.env_tree_steps", pricer.env_tree_steps);

    AH_DOUBLE("trainer.discount", trainer.discount);
    AH_INT("trainer.batch", trainer.batch);
    AH_DOUBLE("trainer.actor_lr", trainer.actor_lr);
    AH_DOUBLE("trainer.critic_lr", trainer.critic_lr);
    AH_DOUBLE("trainer.soft_update", trainer.soft_update_coeff);
    AH_DOUBLE("trainer.noise_std_start", trainer.noise_std_start);
    AH_DOUBLE("trainer.noise_std_end", trainer.noise_std_end);
    AH_INT("trainer.n_step", trainer.n_step);
    AH_INT("trainer.episodes", trainer.episodes);
    fields["trainer.objective"] =
        Field{[](const ExperimentConfig& c) { return fmt_str(drl::to_string(c.trainer.objective)); },
              [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                try {
                  c.trainer.objective = drl::objective_from_string(as_string(k, v));
                } catch (const std::invalid_argument& e) {
                  bad(k, e.what());
                }
              }};
    AH_INT("trainer.workers", trainer.workers);
    AH_LIST("trainer.actor_hidden", trainer.actor_hidden);
    AH_LIST("trainer.critic_hidden", trainer.critic_hidden);
    AH_INT("trainer.n_quantiles", trainer.n_quantiles);
    AH_INT("trainer.replay_capacity", trainer.replay_capacity);
    AH_DOUBLE("trainer.huber_k", trainer.huber_k);
    AH_DOUBLE("trainer.updates_per_step", trainer.updates_per_step);
    AH_DOUBLE("trainer.reward_scale", trainer.reward_scale);
    AH_INT("trainer.warmup", trainer.warmup);
    AH_INT("trainer.curve_every", trainer.curve_every);
    AH_INT("trainer.curve_eval_episodes", trainer.curve_eval_episodes);

    AH_U64("seeds.train", seeds.train);
    AH_U64("seeds.eval", seeds.eval);

    fields["output.dir"] =
        Field{[](const ExperimentConfig& c) { return fmt_str(c.output_dir); },
              [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                c.output_dir = as_string(k, v);
              }};
    return fields;
  }();
  return table;
}

#undef AH_DOUBLE
#undef AH_INT
#undef AH_U64
#undef AH_BOOL
#undef AH_LIST

void set_field(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const auto& reg = registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(c, key, raw);
}

// Invariant checks report the dotted key; module validators report field names.
template <typename Fn>
void check_section(const std::string& section, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::string best;
    for (const auto& [key, field] : registry()) {
      if (key.rfind(section + ".", 0) != 0) continue;
      const std::string name = key.substr(section.size() + 1);
      if (msg.find(name) != std::string::npos && key.size() > best.size()) best = key;
    }
    if (!best.empty()) throw ConfigError("config key '" + best + "': " + msg);
    throw ConfigError("config section [" + section + "]: " + msg);
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [key, field] : registry()) {
    if (key == "output.dir") continue;
    out += key + " = " + field.get(*this) + "\n";
  }
  return out;
}

std::string ExperimentConfig::fingerprint() const { return fnv1a_hex(canonical()); }

void ExperimentConfig::validate() const {
  check_section("market", [&] { market.validate(); });
  check_section("note", [&] { note.validate(); });
  check_section("env", [&] {
    if (env.kappa < 0.0) bad("env.kappa", "must be >= 0");
    if (env.underlying_kappa < 0.0) bad("env.underlying_kappa", "must be >= 0");
    env.validate();
  });
  check_section("pricer", [&] { pricer.validate(); });
  check_section("trainer", [&] { trainer.validate(); });
  if (env.mode == EnvMode::autocallable && env.horizon > note.term + 1e-9) {
    bad("env.horizon", "exceeds note.term");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Raw> values;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string name = trim(line.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    if (registry().count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
    if (values.count(key)) throw ConfigError("config key '" + key + "' given twice");
    values[key] = Raw{trim(line.substr(eq + 1)), lineno};
  }

  ExperimentConfig c;
  if (const auto it = values.find("env.mode"); it != values.end()) {
    set_field(c, "env.mode", it->second.text);
    c.env = EnvConfig::defaults(c.env.mode);
  }
  for (const auto& [key, raw] : values) {
    if (key == "env.mode") continue;
    set_field(c, key, raw.text);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' lacks '='");
  const std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  const auto& reg = registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError("unknown config key '" + key + "'");
  // Allow bare words for string-valued keys on the command line.
  const std::string current = it->second.get(config);
  if (!current.empty() && current.front() == '"' && (value.empty() || value.front() != '"')) {
    value = "\"" + value + "\"";
  }
  if (key == "env.mode") {
    ExperimentConfig tmp;
    set_field(tmp, key, value);
    config.env = EnvConfig::defaults(tmp.env.mode);
  } else {
    set_field(config, key, value);
  }
  config.validate();
}

}  // namespace autohedge
