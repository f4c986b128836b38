#pragma once

#include <memory>
#include <string>
#include <vector>

#include "autohedge/instruments.hpp"
#include "autohedge/lsmc.hpp"
#include "autohedge/mdp.hpp"
#include "autohedge/note_valuer.hpp"

namespace autohedge {

enum class EnvMode { vanilla_flow, autocallable };
enum class HedgeInstrument { digital, american_pair };

std::string to_string(EnvMode mode);
std::string to_string(HedgeInstrument instrument);
EnvMode env_mode_from_string(const std::string& name);
HedgeInstrument hedge_instrument_from_string(const std::string& name);

struct EnvConfig {
  EnvMode mode = EnvMode::autocallable;
  double dt = 1.0 / 12.0;
  double kappa = 0.02;
  HedgeInstrument hedge_instrument = HedgeInstrument::digital;
  double max_hedge_multiplier = 5.0;
  double rate = 0.0;
  double arrival_lambda = 1.0;  // expected arrivals per step
  double horizon = 7.0;
  bool early_exercise = true;
  double substep_dt = 1.0 / 252.0;
  double hedge_maturity = 1.0 / 12.0;   // American pair and vanilla-mode digitals
  double client_maturity = 1.0 / 12.0;  // vanilla client options
  double underlying_kappa = 0.0;        // cost fraction on the delta leg

  static EnvConfig defaults(EnvMode mode);
  void validate() const;
  int n_steps() const;
};

struct EnvState {
  int step = 0;
  double t = 0.0;
  double spot = 0.0;
  double vol = 0.0;
  double portfolio_gamma = 0.0;
  double tau_next_call = 0.0;
  double cash = 0.0;
  double underlying_units = 0.0;
  bool note_alive = false;
  double note_quantity = 0.0;
  std::vector<OptionSpec> client_positions;
  std::vector<OptionSpec> hedge_positions;
  bool done = false;
};

struct HedgeTrade {
  OptionSpec instrument;
  double units = 0.0;
  double unit_value = 0.0;
  double unit_delta = 0.0;
  double unit_gamma = 0.0;
  double underlying_units = 0.0;
  bool gamma_too_small = false;
};

/// Value and Greeks of the client book and of the hedge-option book.
struct BookValue {
  double client_value = 0.0;
  double client_delta = 0.0;
  double client_gamma = 0.0;
  double hedge_value = 0.0;
  double hedge_delta = 0.0;
  double hedge_gamma = 0.0;
};

struct StepInfo {
  HedgeTrade trade;
  double cost = 0.0;
  double gamma_client = 0.0;  // at the rebalance instant
  double gamma_hedge = 0.0;   // hedge book after the rebalance
  double book_delta_after = 0.0;
  double book_gamma_after = 0.0;
  double value_before = 0.0;  // P^- at the rebalance instant
  double value_after = 0.0;   // P^- at the next instant
  bool action_clipped = false;
  int exercises = 0;
  int arrivals = 0;
};

/// Draws this step's client options (vanilla mode): Poisson(lambda) count of
/// ATM American options, call/put and long/short each with probability 1/2.
std::vector<OptionSpec> client_flow_arrivals(const EnvState& state, RngStream& rng,
                                             const EnvConfig& config);

struct ExerciseModels {
  std::shared_ptr<const ContinuationModel> call;
  std::shared_ptr<const ContinuationModel> put;
};

/// Exercises every American position (client and hedge) whose holder would
/// exercise under the LSMC rule; proceeds are signed by position and added to
/// state.cash. Returns the number of exercised positions.
int settle_early_exercise(EnvState& state, const ExerciseModels& models);

class HedgingEnv : public Environment {
 public:
  HedgingEnv(EnvConfig config, SabrParams market, AutocallableSpec note, PricerConfig pricer,
             std::shared_ptr<const NoteValuer> note_valuer, ExerciseModels exercise);

  Observation reset(std::uint64_t seed) override;
  StepResult step(double action) override;
  std::size_t observation_size() const override { return 3; }

  /// `hedge = false` skips both the option and the delta leg.
  Transition step_full(double action, bool hedge = true);

  HedgeTrade action_to_trade(double action) const;
  Observation observe() const;

  const EnvState& state() const { return state_; }
  const StepInfo& last_info() const { return info_; }
  const BookValue& book() const { return book_; }
  const EnvConfig& config() const { return config_; }
  double portfolio_value() const;
  double gamma_scale() const { return gamma_scale_; }
  double initial_value() const { return initial_value_; }

 private:
  void revalue();
  void settle();
  double reference_price() const;
  double local_vol() const;

  EnvConfig config_;
  SabrParams market_;
  AutocallableSpec note_;
  PricerConfig pricer_;
  std::shared_ptr<const NoteValuer> note_valuer_;
  ExerciseModels exercise_;
  double gamma_scale_ = 1.0;

  EnvState state_;
  BookValue book_;
  StepInfo info_;
  double initial_value_ = 0.0;
  std::uint64_t episode_seed_ = 0;
  std::unique_ptr<RngStream> market_rng_;
  std::unique_ptr<RngStream> flow_rng_;
};

/// Default valuation setup shared by every environment of an experiment.
struct EnvResources {
  std::shared_ptr<const NoteValuer> note_valuer;
  ExerciseModels exercise;
};

/// Fits the call/put exercise models when the mode needs them and builds the
/// note valuer; deterministic in `seed`.
EnvResources make_env_resources(const EnvConfig& config, const SabrParams& market,
                                const AutocallableSpec& note, const PricerConfig& pricer,
                                std::uint64_t seed);

}  // namespace autohedge
