#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace autohedge {

/// GBM spot with SABR stochastic volatility.
///
///   dx = mu x dt + sigma x^beta dW1
///   dsigma = nu sigma dW2,   d<W1, W2> = rho dt
struct SabrParams {
  double spot0 = 100.0;
  double mu = 0.0;
  double sigma0 = 0.2;
  double beta = 1.0;
  double rho = -0.4;
  double nu = 0.3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TimeGrid {
  int n_steps = 1;
  double dt = 1.0 / 12.0;
  double t0 = 0.0;

  void validate() const;
  double time(int step) const { return t0 + dt * step; }
  double horizon() const { return time(n_steps); }
};

/// 64-bit finalizer used to derive independent stream ids.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream. Copying a stream copies its full state, so a copy
/// replays exactly the same draws (used for common random numbers).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  long poisson(double mean);

  /// Independent child stream, a pure function of (seed, stream_id, index).
  RngStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long path, long step)
      : std::runtime_error(what + " (path " + std::to_string(path) + ", step " +
                           std::to_string(step) + ")"),
        path_(path),
        step_(step) {}
  long path() const { return path_; }
  long step() const { return step_; }

 private:
  long path_;
  long step_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PathSet {
  TimeGrid grid;
  RowMatrix spots;  // [path x (n_steps + 1)]
  RowMatrix vols;
  std::uint64_t seed = 0;

  long n_paths() const { return static_cast<long>(spots.rows()); }
};

struct MarketState {
  double spot;
  double vol;
};

/// One increment of the scheme: log-Euler for the spot, exact lognormal for
/// the volatility. Draws Z1 then the independent part of Z2 from `rng`.
MarketState step_state(double spot, double vol, const SabrParams& params, double dt,
                       RngStream& rng);

/// Path p uses rng.substream(p); each step consumes draws exactly as step_state.
PathSet simulate_paths(const SabrParams& params, const TimeGrid& grid, long n_paths,
                       const RngStream& rng);

/// CSV with header `path,step,time,spot,vol`.
void write_paths_csv(const PathSet& paths, std::ostream& out);

}  // namespace autohedge
