#include "autohedge/env.hpp"

#include <algorithm>
#include <cmath>

namespace autohedge {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kMinUnitGamma = 1e-10;

// Stream ids inside one episode seed.
constexpr std::uint64_t kMarketStream = 1;
constexpr std::uint64_t kFlowStream = 2;
constexpr std::uint64_t kNoteStream = 3;

bool on_month(double t, int& month) {
  const double pos = t * 12.0;
  month = static_cast<int>(std::lround(pos));
  return std::abs(pos - month) < 1e-7;
}

}  // namespace

std::string to_string(EnvMode mode) {
  return mode == EnvMode::autocallable ? "autocallable" : "vanilla_flow";
}

std::string to_string(HedgeInstrument instrument) {
  return instrument == HedgeInstrument::digital ? "digital" : "american_pair";
}

EnvMode env_mode_from_string(const std::string& name) {
  if (name == "autocallable") return EnvMode::autocallable;
  if (name == "vanilla_flow") return EnvMode::vanilla_flow;
  throw std::invalid_argument("unknown env mode '" + name + "'");
}

HedgeInstrument hedge_instrument_from_string(const std::string& name) {
  if (name == "digital") return HedgeInstrument::digital;
  if (name == "american_pair") return HedgeInstrument::american_pair;
  throw std::invalid_argument("unknown hedge instrument '" + name + "'");
}

EnvConfig EnvConfig::defaults(EnvMode mode) {
  EnvConfig c;
  c.mode = mode;
  if (mode == EnvMode::vanilla_flow) {
    c.dt = 1.0 / 252.0;
    c.horizon = 1.0 / 12.0;
    c.hedge_instrument = HedgeInstrument::american_pair;
    c.max_hedge_multiplier = 1.0;
  } else {
    c.dt = 1.0 / 12.0;
    c.horizon = 7.0;
    c.hedge_instrument = HedgeInstrument::digital;
    c.max_hedge_multiplier = 5.0;
  }
  return c;
}

int EnvConfig::n_steps() const { return static_cast<int>(std::lround(horizon / dt)); }

void EnvConfig::validate() const {
  if (!(kappa >= 0.0)) throw std::invalid_argument("env.kappa must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("env.dt must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("env.horizon must be > 0");
  const double steps = horizon / dt;
  if (std::abs(steps - std::round(steps)) > 1e-6) {
    throw std::invalid_argument("env.horizon must be a multiple of env.dt");
  }
  if (!(max_hedge_multiplier >= 0.0)) {
    throw std::invalid_argument("env.max_hedge_multiplier must be >= 0");
  }
  if (!(arrival_lambda >= 0.0)) throw std::invalid_argument("env.arrival_lambda must be >= 0");
  if (!(substep_dt > 0.0)) throw std::invalid_argument("env.substep_dt must be > 0");
  if (!(hedge_maturity > 0.0)) throw std::invalid_argument("env.hedge_maturity must be > 0");
  if (!(client_maturity > 0.0)) throw std::invalid_argument("env.client_maturity must be > 0");
  if (!(underlying_kappa >= 0.0)) throw std::invalid_argument("env.underlying_kappa must be >= 0");
  if (!std::isfinite(rate)) throw std::invalid_argument("env.rate must be finite");
}

std::vector<OptionSpec> client_flow_arrivals(const EnvState& state, RngStream& rng,
                                             const EnvConfig& config) {
  std::vector<OptionSpec> out;
  if (config.mode != EnvMode::vanilla_flow) return out;
  const long count = rng.poisson(config.arrival_lambda);
  for (long i = 0; i < count; ++i) {
    OptionSpec o;
    o.kind = rng.uniform() < 0.5 ? OptionKind::american_call : OptionKind::american_put;
    o.quantity = rng.uniform() < 0.5 ? 1.0 : -1.0;
    o.strike = state.spot;
    o.maturity = state.t + config.client_maturity;
    out.push_back(o);
  }
  return out;
}

int settle_early_exercise(EnvState& state, const ExerciseModels& models) {
  int exercised = 0;
  auto process = [&](std::vector<OptionSpec>& book) {
    std::erase_if(book, [&](const OptionSpec& o) {
      if (!is_american(o.kind)) return false;
      const auto& model = is_call(o.kind) ? models.call : models.put;
      if (!model) return false;
      const double elapsed = model->maturity - (o.maturity - state.t);
      if (!lsmc_exercise_decision(*model, state.spot, elapsed, o.kind, o.strike)) return false;
      state.cash += o.quantity * vanilla_payoff(o, state.spot);
      ++exercised;
      return true;
    });
  };
  process(state.client_positions);
  process(state.hedge_positions);
  return exercised;
}

HedgingEnv::HedgingEnv(EnvConfig config, SabrParams market, AutocallableSpec note,
                       PricerConfig pricer, std::shared_ptr<const NoteValuer> note_valuer,
                       ExerciseModels exercise)
    : config_(config),
      market_(market),
      note_(note),
      pricer_(pricer),
      note_valuer_(std::move(note_valuer)),
      exercise_(std::move(exercise)) {
  config_.validate();
  market_.validate();
  note_.validate();
  pricer_.validate();
  if (config_.mode == EnvMode::autocallable) {
    if (!note_valuer_) throw std::invalid_argument("autocallable mode needs a note valuer");
    const RngStream rng(0, kNoteStream);
    const double g = note_valuer_->value(note_.initial_price, market_.sigma0, 0.0, rng).gamma;
    gamma_scale_ = std::isfinite(g) && std::abs(g) > 0.0 ? std::abs(g) : 1.0;
  } else {
    const double lv = market_.sigma0 * std::pow(market_.spot0, market_.beta - 1.0);
    const double g = american_valuation(OptionKind::american_call, market_.spot0, market_.spot0, lv,
                                        config_.rate, config_.client_maturity,
                                        pricer_.env_tree_steps)
                         .gamma;
    gamma_scale_ = std::isfinite(g) && g > 0.0 ? g : 1.0;
  }
}

double HedgingEnv::reference_price() const {
  return config_.mode == EnvMode::autocallable ? note_.initial_price : market_.spot0;
}

double HedgingEnv::local_vol() const {
  return state_.vol * std::pow(state_.spot, market_.beta - 1.0);
}

double HedgingEnv::portfolio_value() const {
  return state_.cash + state_.underlying_units * state_.spot + book_.client_value +
         book_.hedge_value;
}

Observation HedgingEnv::observe() const {
  Observation obs;
  const double tau_scale =
      config_.mode == EnvMode::autocallable ? note_.autocall_frequency / 12.0 : 1.0;
  obs.features = {state_.spot / reference_price() - 1.0, state_.portfolio_gamma / gamma_scale_,
                  state_.tau_next_call / tau_scale};
  return obs;
}

void HedgingEnv::revalue() {
  BookValue b;
  const double lv = local_vol();
  auto add = [&](const OptionSpec& o, double& value, double& delta, double& gamma) {
    const Valuation v = option_valuation(o, state_.spot, lv, config_.rate, state_.t,
                                         pricer_.env_tree_steps);
    value += o.quantity * v.price;
    delta += o.quantity * v.delta;
    gamma += o.quantity * v.gamma;
  };
  for (const auto& o : state_.client_positions) add(o, b.client_value, b.client_delta, b.client_gamma);
  for (const auto& o : state_.hedge_positions) add(o, b.hedge_value, b.hedge_delta, b.hedge_gamma);
  if (state_.note_alive) {
    const RngStream rng(episode_seed_, mix64(kNoteStream ^ mix64(state_.step)));
    const Valuation v = note_valuer_->value(state_.spot, state_.vol, state_.t, rng);
    b.client_value += state_.note_quantity * v.price;
    b.client_delta += state_.note_quantity * v.delta;
    b.client_gamma += state_.note_quantity * v.gamma;
  }
  book_ = b;
  state_.portfolio_gamma = b.client_gamma + b.hedge_gamma;
  if (config_.mode == EnvMode::autocallable) {
    const int month_floor = static_cast<int>(std::floor(state_.t * 12.0 + 1e-7));
    const int next = NoteObserver(note_).next_autocall_month(month_floor);
    state_.tau_next_call = next / 12.0 - state_.t;
  } else {
    state_.tau_next_call = config_.dt;
  }
}

Observation HedgingEnv::reset(std::uint64_t seed) {
  episode_seed_ = seed;
  market_rng_ = std::make_unique<RngStream>(seed, kMarketStream);
  flow_rng_ = std::make_unique<RngStream>(seed, kFlowStream);
  state_ = EnvState{};
  state_.spot = market_.spot0;
  state_.vol = market_.sigma0;
  if (config_.mode == EnvMode::autocallable) {
    state_.note_alive = true;
    state_.note_quantity = -1.0;
  }
  info_ = StepInfo{};
  revalue();
  initial_value_ = portfolio_value();
  return observe();
}

HedgeTrade HedgingEnv::action_to_trade(double action) const {
  HedgeTrade trade;
  OptionSpec& inst = trade.instrument;
  inst.quantity = 1.0;
  const double book_delta = book_.client_delta + book_.hedge_delta + state_.underlying_units;
  if (config_.hedge_instrument == HedgeInstrument::digital) {
    inst.kind = OptionKind::digital_cash_call;
    inst.cash_amount = 1.0;
    if (config_.mode == EnvMode::autocallable) {
      inst.strike = note_.initial_price * (1.0 + note_.call_barrier);
      inst.maturity = state_.t + state_.tau_next_call;
    } else {
      inst.strike = state_.spot;
      inst.maturity = state_.t + config_.hedge_maturity;
    }
  } else {
    inst.kind = OptionKind::american_call;
    inst.strike = state_.spot;
    inst.maturity = state_.t + config_.hedge_maturity;
  }

  const double target = -action * config_.max_hedge_multiplier * book_.client_gamma;
  const double needed = target - book_.hedge_gamma;
  const double lv = local_vol();
  auto unit = [&]() {
    return option_valuation(inst, state_.spot, lv, config_.rate, state_.t, pricer_.env_tree_steps);
  };
  Valuation v = unit();
  if (config_.hedge_instrument == HedgeInstrument::american_pair && v.gamma != 0.0) {
    // Take the side whose delta leans against the current book delta.
    const double units = needed / v.gamma;
    if (!(units * book_delta < 0.0) && units != 0.0) {
      inst.kind = OptionKind::american_put;
      v = unit();
    }
  }
  trade.unit_value = v.price;
  trade.unit_delta = v.delta;
  trade.unit_gamma = v.gamma;
  if (std::abs(v.gamma) < kMinUnitGamma) {
    trade.gamma_too_small = needed != 0.0;
  } else {
    trade.units = needed / v.gamma;
  }
  trade.underlying_units = -(book_delta + trade.units * trade.unit_delta);
  return trade;
}

void HedgingEnv::settle() {
  // Expiries.
  auto expire = [&](std::vector<OptionSpec>& book) {
    std::erase_if(book, [&](const OptionSpec& o) {
      if (o.maturity > state_.t + kTimeEps) return false;
      state_.cash += o.quantity * vanilla_payoff(o, state_.spot);
      return true;
    });
  };
  expire(state_.client_positions);
  expire(state_.hedge_positions);

  if (config_.early_exercise) info_.exercises = settle_early_exercise(state_, exercise_);

  int month = 0;
  if (state_.note_alive && on_month(state_.t, month) && month >= 1) {
    const auto outcome = NoteObserver(note_).observe(month, state_.spot);
    state_.cash += state_.note_quantity * outcome.amount;
    if (outcome.terminated) {
      state_.note_alive = false;
      state_.done = true;
    }
  }

  if (config_.mode == EnvMode::vanilla_flow) {
    const auto arrivals = client_flow_arrivals(state_, *flow_rng_, config_);
    const double lv = local_vol();
    for (const auto& o : arrivals) {
      const Valuation v =
          option_valuation(o, state_.spot, lv, config_.rate, state_.t, pricer_.env_tree_steps);
      state_.cash -= o.quantity * v.price;
      state_.client_positions.push_back(o);
    }
    info_.arrivals = static_cast<int>(arrivals.size());
  }
}

StepResult HedgingEnv::step(double action) {
  Transition tr = step_full(action, true);
  return {tr.reward, std::move(tr.next_obs), tr.done};
}

Transition HedgingEnv::step_full(double action_in, bool hedge) {
  if (!market_rng_) throw ContractError("HedgingEnv::step before reset");
  if (state_.done) throw ContractError("HedgingEnv::step after the episode ended");
  info_ = StepInfo{};
  double action = std::isfinite(action_in) ? action_in : 0.0;
  if (action != action_in || action < 0.0 || action > 1.0) {
    action = std::clamp(action, 0.0, 1.0);
    info_.action_clipped = true;
  }

  Transition out;
  out.obs = observe();
  out.action = action;
  info_.value_before = portfolio_value();
  info_.gamma_client = book_.client_gamma;
  info_.gamma_hedge = book_.hedge_gamma;

  double cost = 0.0;
  if (hedge) {
    const HedgeTrade trade = action_to_trade(action);
    info_.trade = trade;
    if (trade.units != 0.0) {
      OptionSpec pos = trade.instrument;
      pos.quantity = trade.units;
      state_.hedge_positions.push_back(pos);
      state_.cash -= trade.units * trade.unit_value;
      book_.hedge_value += trade.units * trade.unit_value;
      book_.hedge_delta += trade.units * trade.unit_delta;
      book_.hedge_gamma += trade.units * trade.unit_gamma;
    }
    cost += config_.kappa * std::abs(trade.unit_value * trade.units);
    state_.underlying_units += trade.underlying_units;
    state_.cash -= trade.underlying_units * state_.spot;
    cost += config_.underlying_kappa * std::abs(trade.underlying_units * state_.spot);
    info_.gamma_hedge = book_.hedge_gamma;
  }
  info_.book_delta_after = book_.client_delta + book_.hedge_delta + state_.underlying_units;
  info_.book_gamma_after = book_.client_gamma + book_.hedge_gamma;
  info_.cost = cost;
  const double value_plus = portfolio_value();

  // Market evolution on the sub-step grid.
  const int n_sub = std::max(1, static_cast<int>(std::lround(config_.dt / config_.substep_dt)));
  const double h = config_.dt / n_sub;
  for (int k = 0; k < n_sub; ++k) {
    const auto next = step_state(state_.spot, state_.vol, market_, h, *market_rng_);
    state_.spot = next.spot;
    state_.vol = next.vol;
  }
  state_.cash *= std::exp(config_.rate * config_.dt);
  ++state_.step;
  state_.t = state_.step * config_.dt;

  settle();
  if (state_.step >= config_.n_steps()) state_.done = true;
  revalue();

  info_.value_after = portfolio_value();
  out.reward = -cost + (info_.value_after - value_plus);
  out.next_obs = observe();
  out.done = state_.done;
  return out;
}

EnvResources make_env_resources(const EnvConfig& config, const SabrParams& market,
                                const AutocallableSpec& note, const PricerConfig& pricer,
                                std::uint64_t seed) {
  EnvResources res;
  PricerConfig p = pricer;
  p.rate = config.rate;
  if (config.mode == EnvMode::autocallable) {
    res.note_valuer = std::make_shared<NoteValuer>(note, market, p, mix64(seed ^ 0x6e6f7465ULL));
  }
  const bool americans = config.mode == EnvMode::vanilla_flow ||
                         config.hedge_instrument == HedgeInstrument::american_pair;
  if (config.early_exercise && americans) {
    SabrParams q = market;
    q.mu = config.rate;
    TimeGrid grid;
    grid.dt = config.dt;
    grid.n_steps = static_cast<int>(std::lround(config.client_maturity / config.dt));
    if (grid.n_steps < 1 || std::abs(grid.n_steps * grid.dt - config.client_maturity) > 1e-9) {
      throw std::invalid_argument("env.client_maturity must be a multiple of env.dt for LSMC");
    }
    const PathSet paths =
        simulate_paths(q, grid, p.lsmc_training_paths, RngStream(seed, 0x6c736d63ULL));
    const std::vector<double> strikes{0.9 * market.spot0, 0.95 * market.spot0, market.spot0,
                                      1.05 * market.spot0, 1.1 * market.spot0};
    res.exercise.call = std::make_shared<ContinuationModel>(
        lsmc_fit(paths, OptionKind::american_call, strikes, config.client_maturity, config.rate, p));
    res.exercise.put = std::make_shared<ContinuationModel>(
        lsmc_fit(paths, OptionKind::american_put, strikes, config.client_maturity, config.rate, p));
  }
  return res;
}

}  // namespace autohedge
