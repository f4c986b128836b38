#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "autohedge/pricing.hpp"

namespace autohedge {

/// Values the live autocallable for the environment.
///
/// Without the cache every call runs price_autocallable_mc on the stream the
/// caller passes. With `PricerConfig::valuation_cache` enabled, monthly dates
/// are served from a lazily filled grid of nodes at log-spaced spots and vols,
/// interpolated bilinearly in (log spot, log vol). Node streams depend on
/// (month, vol node) only, so all spot nodes of one slice share random numbers
/// and the interpolated curve in spot is smooth. Safe to share across threads.
class NoteValuer {
 public:
  NoteValuer(AutocallableSpec spec, SabrParams params, PricerConfig config,
             std::uint64_t cache_seed);

  Valuation value(double spot, double vol, double t, const RngStream& rng) const;

  const AutocallableSpec& spec() const { return spec_; }
  const PricerConfig& config() const { return config_; }
  std::size_t cached_nodes() const;

 private:
  struct Key {
    int month;
    int spot_index;
    int vol_index;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  Valuation node(int month, int spot_index, int vol_index) const;

  AutocallableSpec spec_;
  SabrParams params_;
  PricerConfig config_;
  std::uint64_t cache_seed_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Key, Valuation, KeyHash> nodes_;
};

}  // namespace autohedge
