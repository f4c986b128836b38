#include "autohedge/market.hpp"

#include <cmath>
#include <ostream>

namespace autohedge {

void SabrParams::validate() const {
  if (!(spot0 > 0.0)) throw std::invalid_argument("market.spot0 must be > 0");
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("market.sigma0 must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("market.beta must be in [0, 1]");
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("market.rho must be in (-1, 1)");
  if (!(nu >= 0.0)) throw std::invalid_argument("market.nu must be >= 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("market.mu must be finite");
}

void TimeGrid::validate() const {
  if (n_steps < 1) throw std::invalid_argument("time grid needs n_steps >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("time grid needs dt > 0");
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

long RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(engine_);
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(index + 1)));
}

namespace {

// Returns false when the increment produced a non-finite or non-positive spot.
bool advance(double& spot, double& vol, const SabrParams& p, double dt, RngStream& rng) {
  const double z1 = rng.normal();
  const double zi = rng.normal();
  const double z2 = p.rho * z1 + std::sqrt(1.0 - p.rho * p.rho) * zi;
  const double sqdt = std::sqrt(dt);
  const double local_vol = vol * std::pow(spot, p.beta - 1.0);
  spot *= std::exp((p.mu - 0.5 * local_vol * local_vol) * dt + local_vol * sqdt * z1);
  vol *= std::exp(-0.5 * p.nu * p.nu * dt + p.nu * sqdt * z2);
  return std::isfinite(spot) && spot > 0.0 && std::isfinite(vol) && vol >= 0.0;
}

}  // namespace

MarketState step_state(double spot, double vol, const SabrParams& params, double dt,
                       RngStream& rng) {
  if (!(spot > 0.0) || !(vol >= 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("step_state requires spot > 0, vol >= 0, dt > 0");
  }
  if (!advance(spot, vol, params, dt, rng)) {
    throw SimulationError("non-finite state in step_state", -1, -1);
  }
  return {spot, vol};
}

PathSet simulate_paths(const SabrParams& params, const TimeGrid& grid, long n_paths,
                       const RngStream& rng) {
  params.validate();
  grid.validate();
  if (n_paths < 1) throw std::invalid_argument("simulate_paths needs n_paths >= 1");

  PathSet out;
  out.grid = grid;
  out.seed = rng.seed();
  out.spots.resize(n_paths, grid.n_steps + 1);
  out.vols.resize(n_paths, grid.n_steps + 1);
  for (long p = 0; p < n_paths; ++p) {
    RngStream path_rng = rng.substream(static_cast<std::uint64_t>(p));
    double spot = params.spot0;
    double vol = params.sigma0;
    out.spots(p, 0) = spot;
    out.vols(p, 0) = vol;
    for (int k = 1; k <= grid.n_steps; ++k) {
      if (!advance(spot, vol, params, grid.dt, path_rng)) {
        throw SimulationError("non-finite state in simulate_paths", p, k);
      }
      out.spots(p, k) = spot;
      out.vols(p, k) = vol;
    }
  }
  return out;
}

void write_paths_csv(const PathSet& paths, std::ostream& out) {
  out << "path,step,time,spot,vol\n";
  const auto old_precision = out.precision(17);
  for (long p = 0; p < paths.n_paths(); ++p) {
    for (int k = 0; k <= paths.grid.n_steps; ++k) {
      out << p << ',' << k << ',' << paths.grid.time(k) << ',' << paths.spots(p, k) << ','
          << paths.vols(p, k) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace autohedge
