#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "autohedge/drl/trainer.hpp"
#include "autohedge/env.hpp"
#include "autohedge/instruments.hpp"
#include "autohedge/market.hpp"
#include "autohedge/pricing.hpp"

namespace autohedge {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedConfig {
  std::uint64_t train = 1;
  std::uint64_t eval = 2;
};

struct ExperimentConfig {
  SabrParams market;
  AutocallableSpec note;
  EnvConfig env = EnvConfig::defaults(EnvMode::autocallable);
  PricerConfig pricer;
  drl::TrainerConfig trainer;
  SeedConfig seeds;
  std::string output_dir = ".";

  /// Every resolved field as sorted `section.key = value` lines.
  std::string canonical() const;
  /// 16 hex digits of the FNV-1a hash of canonical().
  std::string fingerprint() const;
  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Sections [market] [note] [env] [pricer] [trainer] [seeds] [output];
/// `key = value` with numbers, true/false, "strings" and [number, lists].
/// Env defaults follow env.mode. Unknown keys and type mismatches throw.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies one `section.key=value` override on top of `config`.
void apply_override(ExperimentConfig& config, const std::string& assignment);

std::string fnv1a_hex(const std::string& text);

}  // namespace autohedge
