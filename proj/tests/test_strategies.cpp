#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "autohedge/drl/mlp.hpp"
#include "autohedge/strategies.hpp"

using namespace autohedge;

namespace {

struct Bench {
  EnvConfig env = EnvConfig::defaults(EnvMode::vanilla_flow);
  SabrParams market;
  AutocallableSpec note;
  PricerConfig pricer;
  EnvResources res;

  explicit Bench(EnvMode mode) : env(EnvConfig::defaults(mode)) {
    pricer.n_mc_paths = 300;
    pricer.valuation_cache = true;
    pricer.lsmc_training_paths = 2000;
    pricer.env_tree_steps = 50;
    res = make_env_resources(env, market, note, pricer, 1);
  }
  HedgingEnv make() const { return HedgingEnv(env, market, note, pricer, res.note_valuer, res.exercise); }
};

}  // namespace

TEST_CASE("baseline actions") {
  const Observation obs{{0.0, 0.0, 0.1}};
  EnvConfig cfg = EnvConfig::defaults(EnvMode::autocallable);
  CHECK(Strategy::delta_neutral().act(obs, cfg).action == 0.0);
  CHECK(Strategy::none().act(obs, cfg).action == 0.0);
  CHECK(Strategy::delta_gamma_neutral().act(obs, cfg).action == doctest::Approx(0.2));
  cfg.max_hedge_multiplier = 1.0;
  CHECK(Strategy::delta_gamma_neutral().act(obs, cfg).action == 1.0);
  cfg.max_hedge_multiplier = 0.5;
  const StrategyAction capped = Strategy::delta_gamma_neutral().act(obs, cfg);
  CHECK(capped.action == 1.0);
  CHECK(capped.clipped);
  CHECK(Strategy::constant_fraction(0.3).act(obs, cfg).action == 0.3);
  CHECK_THROWS(Strategy::constant_fraction(1.5));
  CHECK_FALSE(Strategy::none().trades());
  CHECK(Strategy::delta_neutral().trades());
}

TEST_CASE("strategy strings") {
  CHECK(Strategy::parse("delta").kind() == StrategyKind::delta_neutral);
  CHECK(Strategy::parse("delta-gamma").kind() == StrategyKind::delta_gamma_neutral);
  CHECK(Strategy::parse("none").kind() == StrategyKind::none);
  const Strategy c = Strategy::parse("const:0.25");
  CHECK(c.kind() == StrategyKind::constant_fraction);
  CHECK(c.label() == "const:0.25");
  CHECK_THROWS(Strategy::parse("const:"));
  CHECK_THROWS(Strategy::parse("const:0.2x"));
  CHECK_THROWS(Strategy::parse("gamma"));
}

TEST_CASE("rl strategy clamps the actor output") {
  drl::Mlp actor = drl::Mlp::zeros({3, 1}, drl::OutputActivation::identity);
  actor.biases()[0](0) = 1.4;
  const Strategy s = Strategy::rl_policy(std::make_shared<const drl::Mlp>(actor));
  const StrategyAction a = s.act(Observation{{0.0, 1.0, 0.5}}, EnvConfig::defaults(EnvMode::vanilla_flow));
  CHECK(a.action == 1.0);
  CHECK(a.clipped);
  CHECK_THROWS(Strategy::rl_policy(nullptr));
}

TEST_CASE("gamma ratio pooling") {
  EpisodeTrace t;
  t.rows.push_back({0, 0, 100, 0, 0, 0, 0, -2.0, 1.0, false});
  t.rows.push_back({1, 0, 100, 0, 0, 0, 0, 0.0, 5.0, false});
  t.rows.push_back({2, 0, 100, 0, 0, 0, 0, 4.0, -4.0, true});
  CHECK(gamma_ratio(t) == doctest::Approx(5.0 / 6.0));
  EpisodeTrace empty;
  CHECK(gamma_ratio(empty) == 0.0);
  EpisodeTrace u;
  u.rows.push_back({0, 0, 100, 0, 0, 0, 0, 1.0, 0.0, true});
  CHECK(gamma_ratio(std::vector<EpisodeTrace>{t, u}) == doctest::Approx(5.0 / 7.0));
}

TEST_CASE("baseline gamma ratios on the vanilla book") {
  const Bench b(EnvMode::vanilla_flow);
  HedgingEnv env = b.make();
  std::vector<EpisodeTrace> delta, dg, half;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    delta.push_back(run_episode(env, Strategy::delta_neutral(), seed));
    dg.push_back(run_episode(env, Strategy::delta_gamma_neutral(), seed));
    half.push_back(run_episode(env, Strategy::constant_fraction(0.5), seed));
  }
  CHECK(gamma_ratio(delta) == 0.0);
  CHECK(gamma_ratio(dg) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gamma_ratio(half) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("constant zero matches the delta hedge") {
  const Bench b(EnvMode::autocallable);
  HedgingEnv env = b.make();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const EpisodeTrace a = run_episode(env, Strategy::delta_neutral(), seed);
    const EpisodeTrace c = run_episode(env, Strategy::constant_fraction(0.0), seed);
    CHECK(a.pnl() == c.pnl());
    CHECK(a.rows.size() == c.rows.size());
  }
}

TEST_CASE("delta-gamma rows are flat in both greeks") {
  const Bench b(EnvMode::autocallable);
  HedgingEnv env = b.make();
  const EpisodeTrace t = run_episode(env, Strategy::delta_gamma_neutral(), 9);
  REQUIRE_FALSE(t.rows.empty());
  for (const auto& r : t.rows) {
    CHECK(std::abs(r.gamma_client + r.gamma_hedge) < 1e-6 * (1.0 + std::abs(r.gamma_client)));
    CHECK(r.action == doctest::Approx(0.2));
  }
}

TEST_CASE("episode traces") {
  const Bench b(EnvMode::vanilla_flow);
  HedgingEnv env = b.make();
  const EpisodeTrace t = run_episode(env, Strategy::constant_fraction(0.5), 3);
  CHECK(t.rows.size() == 21);
  CHECK(t.rows.front().time == 0.0);
  CHECK(t.rows.front().spot == 100.0);
  CHECK(t.rows.back().done);
  const EpisodeTrace again = run_episode(env, Strategy::constant_fraction(0.5), 3);
  CHECK(again.pnl() == t.pnl());
  std::ostringstream csv;
  write_trace_csv(t, csv);
  std::string header;
  std::istringstream in(csv.str());
  std::getline(in, header);
  CHECK(header == "step,time,spot,action,units,reward,portfolio_value,gamma_client,gamma_hedge,done");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 21);
}
