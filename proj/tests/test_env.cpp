#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "autohedge/env.hpp"

using namespace autohedge;

namespace {

struct Setup {
  EnvConfig env;
  SabrParams market;
  AutocallableSpec note;
  PricerConfig pricer;
  EnvResources res;

  std::unique_ptr<HedgingEnv> make() const {
    return std::make_unique<HedgingEnv>(env, market, note, pricer, res.note_valuer, res.exercise);
  }
};

Setup autocallable_setup(long paths = 300) {
  Setup s;
  s.env = EnvConfig::defaults(EnvMode::autocallable);
  s.pricer.n_mc_paths = paths;
  s.pricer.valuation_cache = true;
  s.res = make_env_resources(s.env, s.market, s.note, s.pricer, 1);
  return s;
}

Setup vanilla_setup(bool exercise = true, double rate = 0.0) {
  Setup s;
  s.env = EnvConfig::defaults(EnvMode::vanilla_flow);
  s.env.early_exercise = exercise;
  s.env.rate = rate;
  s.pricer.lsmc_training_paths = 2000;
  s.pricer.env_tree_steps = 50;
  s.res = make_env_resources(s.env, s.market, s.note, s.pricer, 1);
  return s;
}

double book_scale(const HedgingEnv& env) {
  const auto& b = env.book();
  return 1.0 + std::abs(b.client_gamma) + std::abs(b.hedge_gamma) + std::abs(b.client_delta);
}

}  // namespace

TEST_CASE("config defaults and invariants") {
  const EnvConfig a = EnvConfig::defaults(EnvMode::autocallable);
  CHECK(a.n_steps() == 84);
  CHECK(a.kappa == 0.02);
  CHECK(a.max_hedge_multiplier == 5.0);
  const EnvConfig v = EnvConfig::defaults(EnvMode::vanilla_flow);
  CHECK(v.n_steps() == 21);
  CHECK(v.max_hedge_multiplier == 1.0);
  EnvConfig bad = a;
  bad.kappa = -0.1;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("env.kappa"));
  bad = a;
  bad.horizon = 0.3;
  CHECK_THROWS(bad.validate());
  CHECK(env_mode_from_string(to_string(EnvMode::vanilla_flow)) == EnvMode::vanilla_flow);
  CHECK(hedge_instrument_from_string("digital") == HedgeInstrument::digital);
  CHECK_THROWS(hedge_instrument_from_string("swap"));
}

TEST_CASE("autocallable reset books a short note") {
  const Setup s = autocallable_setup();
  auto env = s.make();
  const Observation obs = env->reset(5);
  const Valuation note = s.res.note_valuer->value(100.0, 0.2, 0.0, RngStream(0, 0));
  CHECK(env->state().portfolio_gamma == doctest::Approx(-note.gamma).epsilon(1e-12));
  CHECK(env->state().cash == 0.0);
  CHECK(env->portfolio_value() == doctest::Approx(-note.price).epsilon(1e-12));
  REQUIRE(obs.features.size() == 3);
  CHECK(obs.features[0] == 0.0);
  CHECK(obs.features[2] == doctest::Approx(1.0));  // six months to the first call
  CHECK(std::abs(obs.features[1]) == doctest::Approx(1.0).epsilon(1e-9));
  const Observation again = env->reset(5);
  CHECK(again.features == obs.features);
}

TEST_CASE("vanilla reset starts from an empty book") {
  const Setup s = vanilla_setup();
  auto env = s.make();
  const Observation obs = env->reset(3);
  CHECK(env->state().portfolio_gamma == 0.0);
  CHECK(env->state().client_positions.empty());
  CHECK(obs.features[2] == doctest::Approx(s.env.dt));
}

TEST_CASE("reward follows the cost plus value-change decomposition") {
  const Setup s = autocallable_setup();
  auto env = s.make();
  env->reset(8);
  for (double a : {0.0, 0.3, 1.0, 0.6}) {
    if (env->state().done) break;
    const Transition tr = env->step_full(a);
    const StepInfo& info = env->last_info();
    const double traded = std::abs(info.trade.units * info.trade.unit_value);
    CHECK(info.cost == doctest::Approx(s.env.kappa * traded).epsilon(1e-12));
    CHECK(tr.reward == doctest::Approx(-info.cost + info.value_after - info.value_before).epsilon(1e-10));
    if (a == 0.0 && env->book().hedge_gamma == 0.0) CHECK(info.cost == 0.0);
  }
}

TEST_CASE("flat deterministic market telescopes to zero") {
  Setup s;
  s.env = EnvConfig::defaults(EnvMode::autocallable);
  s.market.sigma0 = 0.0;
  s.market.nu = 0.0;
  s.res = make_env_resources(s.env, s.market, s.note, s.pricer, 1);
  auto env = s.make();
  env->reset(1);
  double total = 0.0;
  int steps = 0;
  while (!env->state().done) {
    total += env->step_full(0.0).reward;
    ++steps;
  }
  CHECK(steps == 6);
  CHECK(env->state().t == doctest::Approx(0.5));
  CHECK(std::abs(total) < 1e-9);
  CHECK(env->portfolio_value() == doctest::Approx(-105.7).epsilon(1e-12));
  CHECK_THROWS_AS(env->step_full(0.0), ContractError);
}

TEST_CASE("action mapping hits the gamma target") {
  const Setup s = autocallable_setup();
  auto env = s.make();
  env->reset(12);
  for (double a : {0.0, 0.2, 0.5, 1.0}) {
    const HedgeTrade trade = env->action_to_trade(a);
    const double client = env->book().client_gamma;
    const double hedge_after = env->book().hedge_gamma + trade.units * trade.unit_gamma;
    CHECK(hedge_after == doctest::Approx(-a * s.env.max_hedge_multiplier * client).epsilon(1e-9));
    CHECK(trade.instrument.kind == OptionKind::digital_cash_call);
    CHECK(trade.instrument.strike == doctest::Approx(100.0));
    CHECK(trade.instrument.maturity == doctest::Approx(0.5));
    if (a == 0.0) CHECK(trade.units == 0.0);
    const double delta_after = env->book().client_delta + env->book().hedge_delta +
                               env->state().underlying_units + trade.units * trade.unit_delta +
                               trade.underlying_units;
    CHECK(std::abs(delta_after) < 1e-9);
  }
}

TEST_CASE("rebalance invariants for delta and delta-gamma hedges") {
  for (int mode = 0; mode < 2; ++mode) {
    const Setup s = mode == 0 ? autocallable_setup() : vanilla_setup();
    auto env = s.make();
    const double dg_action = 1.0 / s.env.max_hedge_multiplier;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      env->reset(seed);
      int k = 0;
      while (!env->state().done) {
        const bool dg = (k++ % 2) == 0;
        env->step_full(dg ? dg_action : 0.0);
        const StepInfo& info = env->last_info();
        CHECK(std::abs(info.book_delta_after) < 1e-6 * book_scale(*env));
        if (dg && !info.trade.gamma_too_small) {
          CHECK(std::abs(info.book_gamma_after) < 1e-6 * book_scale(*env));
        }
      }
    }
  }
}

TEST_CASE("delta-only rebalancing leaves client gamma on the book") {
  const Setup s = vanilla_setup();
  auto env = s.make();
  env->reset(4);
  while (!env->state().done) {
    env->step_full(0.0);
    const StepInfo& info = env->last_info();
    CHECK(info.gamma_hedge == 0.0);
    CHECK(info.book_gamma_after == doctest::Approx(info.gamma_client));
    CHECK(std::abs(info.book_delta_after) < 1e-9);
  }
}

TEST_CASE("accounting identity without costs") {
  for (int mode = 0; mode < 2; ++mode) {
    Setup s = mode == 0 ? autocallable_setup() : vanilla_setup();
    s.env.kappa = 0.0;
    auto env = s.make();
    RngStream actions(99, static_cast<std::uint64_t>(mode));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      env->reset(seed);
      const double start = env->portfolio_value();
      double total = 0.0;
      while (!env->state().done) total += env->step_full(actions.uniform()).reward;
      const double change = env->portfolio_value() - start;
      CHECK(std::abs(total - change) <= 1e-8 * std::max(1.0, std::abs(change)));
    }
  }
}

TEST_CASE("autocallable episodes stop at the first successful call date") {
  const Setup s = autocallable_setup();
  auto env = s.make();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    env->reset(seed);
    double prev_tau = env->state().tau_next_call;
    while (!env->state().done) {
      env->step_full(0.0);
      const auto& st = env->state();
      CHECK(st.step <= 84);
      const bool call_date = st.step % 6 == 0;
      if (call_date && st.spot >= 100.0) CHECK(st.done);
      if (!st.done) {
        if (call_date) {
          CHECK(st.tau_next_call == doctest::Approx(0.5));
        } else {
          CHECK(st.tau_next_call == doctest::Approx(prev_tau - s.env.dt));
        }
        CHECK(st.tau_next_call > 0.0);
      }
      prev_tau = st.tau_next_call;
    }
  }
}

TEST_CASE("actions outside the unit interval are clipped and flagged") {
  const Setup s = vanilla_setup();
  auto env = s.make();
  env->reset(1);
  const Transition tr = env->step_full(1.7);
  CHECK(tr.action == 1.0);
  CHECK(env->last_info().action_clipped);
  const Transition tr2 = env->step_full(std::nan(""));
  CHECK(tr2.action == 0.0);
  CHECK(env->last_info().action_clipped);
  env->step_full(0.4);
  CHECK_FALSE(env->last_info().action_clipped);
}

TEST_CASE("client flow arrivals") {
  EnvConfig cfg = EnvConfig::defaults(EnvMode::vanilla_flow);
  EnvState st;
  st.spot = 100.0;
  RngStream rng(1, 1);
  cfg.arrival_lambda = 0.0;
  for (int i = 0; i < 100; ++i) CHECK(client_flow_arrivals(st, rng, cfg).empty());
  cfg.arrival_lambda = 1.0;
  double total = 0.0;
  double calls = 0.0;
  double longs = 0.0;
  const int episodes = 10000;
  for (int e = 0; e < episodes; ++e) {
    for (int d = 0; d < 21; ++d) {
      for (const auto& o : client_flow_arrivals(st, rng, cfg)) {
        total += 1.0;
        calls += o.kind == OptionKind::american_call ? 1.0 : 0.0;
        longs += o.quantity > 0.0 ? 1.0 : 0.0;
        CHECK(o.strike == 100.0);
        CHECK(o.maturity == doctest::Approx(cfg.client_maturity));
      }
    }
  }
  const double per_episode = total / episodes;
  CHECK(std::abs(per_episode - 21.0) < 3.0 * std::sqrt(21.0 / episodes));
  CHECK(calls / total == doctest::Approx(0.5).epsilon(0.04));
  CHECK(longs / total == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("early exercise settlement") {
  const Setup s = vanilla_setup(true, 0.05);
  EnvState st;
  st.spot = 60.0;
  st.t = 0.02;
  CHECK(settle_early_exercise(st, s.res.exercise) == 0);
  OptionSpec deep;
  deep.kind = OptionKind::american_put;
  deep.strike = 100.0;
  deep.maturity = st.t + 0.05;
  deep.quantity = -2.0;
  st.client_positions.push_back(deep);
  OptionSpec euro = deep;
  euro.kind = OptionKind::european_put;
  st.client_positions.push_back(euro);
  CHECK(settle_early_exercise(st, s.res.exercise) == 1);
  CHECK(st.cash == doctest::Approx(-80.0));
  REQUIRE(st.client_positions.size() == 1);
  CHECK(st.client_positions[0].kind == OptionKind::european_put);
}

TEST_CASE("zero rate puts are held") {
  const Setup s = vanilla_setup();
  EnvState st;
  st.spot = 60.0;
  st.t = 0.02;
  OptionSpec deep;
  deep.kind = OptionKind::american_put;
  deep.strike = 100.0;
  deep.maturity = st.t + 0.05;
  deep.quantity = -2.0;
  st.client_positions.push_back(deep);
  CHECK(settle_early_exercise(st, s.res.exercise) == 0);
  CHECK(st.client_positions.size() == 1);
}

TEST_CASE("disabled exercise never settles early") {
  const Setup s = vanilla_setup(false);
  CHECK_FALSE(s.res.exercise.put);
  auto env = s.make();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    env->reset(seed);
    while (!env->state().done) {
      env->step_full(0.5);
      CHECK(env->last_info().exercises == 0);
    }
  }
}

TEST_CASE("vanilla episodes are reproducible") {
  const Setup s = vanilla_setup();
  auto a = s.make();
  auto b = s.make();
  a->reset(42);
  b->reset(42);
  while (!a->state().done) {
    const Transition ta = a->step_full(0.3);
    const Transition tb = b->step_full(0.3);
    CHECK(ta.reward == tb.reward);
    CHECK(ta.next_obs.features == tb.next_obs.features);
  }
  CHECK(a->state().step == 21);
}
