#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "autohedge/drl/mlp.hpp"
#include "autohedge/drl/quantile.hpp"
#include "autohedge/drl/replay.hpp"
#include "autohedge/mdp.hpp"

namespace autohedge::drl {

struct TrainerConfig {
  double discount = 0.99;
  int batch = 256;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double soft_update_coeff = 0.005;
  double noise_std_start = 0.1;
  double noise_std_end = 0.01;  // reached halfway through training
  int n_step = 1;
  long episodes = 40000;
  Objective objective = Objective::mix_5_95;
  int workers = 4;  // experience-collecting environments per round
  std::vector<int> actor_hidden{256, 256, 256};
  std::vector<int> critic_hidden{512, 512, 256};
  int n_quantiles = 100;
  long replay_capacity = 1000000;
  double huber_k = 1.0;
  double updates_per_step = 1.0;
  double reward_scale = 1.0;  // critic sees reward * reward_scale
  long warmup = 0;            // transitions before updates start; 0 means one batch
  long curve_every = 100;     // episodes between training-curve rows
  long curve_eval_episodes = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Actor and critic with everything needed to rebuild the policy.
struct PolicySnapshot {
  Mlp actor;
  Mlp critic;
  std::string config_fingerprint;
  std::vector<double> normalization;
  std::uint64_t seed = 0;

  std::string to_json() const;
  static PolicySnapshot from_json(const std::string& text);
  void save(const std::string& path) const;
  static PolicySnapshot load(const std::string& path);
};

struct CurveRow {
  long step = 0;  // gradient steps so far
  double critic_loss = 0.0;
  double actor_objective = 0.0;
  double eval_var95 = 0.0;  // NaN when not evaluated
};

struct TrainResult {
  PolicySnapshot policy;
  std::vector<CurveRow> curve;
  long gradient_steps = 0;
  long transitions = 0;
};

class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Policy = std::function<double(const Observation&)>;

/// Seed of training (eval = false) or evaluation episode `index`; the two
/// families never coincide for the same base seed.
std::uint64_t episode_seed(std::uint64_t base, std::uint64_t index, bool eval);

/// Noise-free rollouts; returns the summed reward of each episode.
std::vector<double> evaluate(const Policy& policy, const EnvFactory& factory, long n_episodes,
                             std::uint64_t eval_seed, int threads = 1);
std::vector<double> evaluate(const PolicySnapshot& policy, const EnvFactory& factory,
                             long n_episodes, std::uint64_t eval_seed, int threads = 1);

Policy actor_policy(const Mlp& actor);

/// The untrained networks `train` starts from.
PolicySnapshot initial_policy(std::size_t observation_size, const TrainerConfig& config);

/// D4PG with a quantile critic. Collection runs `workers` episodes per round
/// with the current actor, then performs the round's gradient steps; results
/// depend only on the config and the environment (not on `threads`).
TrainResult train(const EnvFactory& factory, const TrainerConfig& config, int threads = 1,
                  const std::function<void(long episodes_done)>& progress = {});

void write_curve_csv(const std::vector<CurveRow>& curve, std::ostream& out);

}  // namespace autohedge::drl
