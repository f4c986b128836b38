#pragma once

#include <memory>
#include <string>
#include <vector>

#include "autohedge/env.hpp"

namespace autohedge {

namespace drl {
class Mlp;
}

enum class StrategyKind { none, delta_neutral, delta_gamma_neutral, constant_fraction, rl_policy };

struct StrategyAction {
  double action = 0.0;
  bool clipped = false;
};

/// Hedging policy shared by the baselines and trained actors.
class Strategy {
 public:
  static Strategy none();
  static Strategy delta_neutral();
  static Strategy delta_gamma_neutral();
  static Strategy constant_fraction(double c);
  static Strategy rl_policy(std::shared_ptr<const drl::Mlp> actor, std::string label = "rl");

  /// `none|delta|delta-gamma|const:<c>`; `rl:<file>` is resolved by the caller.
  static Strategy parse(const std::string& text);

  StrategyAction act(const Observation& obs, const EnvConfig& config) const;
  /// False only for `none`, which skips the delta leg as well.
  bool trades() const { return kind_ != StrategyKind::none; }
  StrategyKind kind() const { return kind_; }
  std::string label() const;

 private:
  Strategy(StrategyKind kind, double fraction, std::shared_ptr<const drl::Mlp> actor,
           std::string label)
      : kind_(kind), fraction_(fraction), actor_(std::move(actor)), label_(std::move(label)) {}

  StrategyKind kind_;
  double fraction_;
  std::shared_ptr<const drl::Mlp> actor_;
  std::string label_;
};

struct TraceRow {
  int step = 0;
  double time = 0.0;
  double spot = 0.0;
  double action = 0.0;
  double units = 0.0;
  double reward = 0.0;
  double portfolio_value = 0.0;
  double gamma_client = 0.0;
  double gamma_hedge = 0.0;
  bool done = false;
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  double initial_value = 0.0;
  std::vector<TraceRow> rows;

  double pnl() const;
};

/// Hedge gamma offsetting the client book, as a fraction of client gamma
/// magnitude pooled over rebalance rows: sum(-gamma_hedge * sign(gamma_client))
/// / sum(|gamma_client|); 0 when client gamma is zero throughout.
double gamma_ratio(const EpisodeTrace& trace);
double gamma_ratio(const std::vector<EpisodeTrace>& traces);

EpisodeTrace run_episode(HedgingEnv& env, const Strategy& strategy, std::uint64_t seed);

/// CSV `step,time,spot,action,units,reward,portfolio_value,gamma_client,gamma_hedge,done`.
void write_trace_csv(const EpisodeTrace& trace, std::ostream& out);

}  // namespace autohedge
