#include "autohedge/note_valuer.hpp"

#include <cmath>

namespace autohedge {

NoteValuer::NoteValuer(AutocallableSpec spec, SabrParams params, PricerConfig config,
                       std::uint64_t cache_seed)
    : spec_(spec), params_(params), config_(config), cache_seed_(cache_seed) {
  spec_.validate();
  params_.validate();
  config_.validate();
}

std::size_t NoteValuer::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(k.month));
  h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.spot_index)));
  h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.vol_index)));
  return static_cast<std::size_t>(h);
}

std::size_t NoteValuer::cached_nodes() const {
  std::lock_guard lock(mutex_);
  return nodes_.size();
}

Valuation NoteValuer::node(int month, int spot_index, int vol_index) const {
  const Key key{month, spot_index, vol_index};
  {
    std::lock_guard lock(mutex_);
    if (auto it = nodes_.find(key); it != nodes_.end()) return it->second;
  }
  const double spot = spec_.initial_price * std::exp(spot_index * config_.cache_log_spot_step);
  const double vol = params_.sigma0 * std::exp(vol_index * config_.cache_log_vol_step);
  const std::uint64_t slice =
      mix64(static_cast<std::uint64_t>(month) * 0x10001ULL +
            static_cast<std::uint64_t>(static_cast<std::uint32_t>(vol_index)));
  const RngStream rng(cache_seed_, slice);
  const Valuation v = price_autocallable_mc(spec_, spot, vol, month / 12.0, params_, config_, rng);
  std::lock_guard lock(mutex_);
  nodes_.emplace(key, v);
  return v;
}

Valuation NoteValuer::value(double spot, double vol, double t, const RngStream& rng) const {
  const double month_pos = t * 12.0;
  const int month = static_cast<int>(std::lround(month_pos));
  const bool on_grid = std::abs(month_pos - month) < 1e-7;
  if (!config_.valuation_cache || !on_grid || vol <= 0.0 || params_.sigma0 <= 0.0) {
    return price_autocallable_mc(spec_, spot, vol, t, params_, config_, rng);
  }
  const double xs = std::log(spot / spec_.initial_price) / config_.cache_log_spot_step;
  const double xv = std::log(vol / params_.sigma0) / config_.cache_log_vol_step;
  const int i0 = static_cast<int>(std::floor(xs));
  const int j0 = static_cast<int>(std::floor(xv));
  const double ws = xs - i0;
  const double wv = xv - j0;

  Valuation out;
  auto accumulate = [&](const Valuation& n, double w) {
    out.price += w * n.price;
    out.delta += w * n.delta;
    out.gamma += w * n.gamma;
    out.std_error += w * n.std_error;
  };
  accumulate(node(month, i0, j0), (1 - ws) * (1 - wv));
  accumulate(node(month, i0 + 1, j0), ws * (1 - wv));
  accumulate(node(month, i0, j0 + 1), (1 - ws) * wv);
  accumulate(node(month, i0 + 1, j0 + 1), ws * wv);
  return out;
}

}  // namespace autohedge
