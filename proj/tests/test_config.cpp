#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "autohedge/config.hpp"

using namespace autohedge;

TEST_CASE("empty config resolves to defaults") {
  const ExperimentConfig a = parse_config("");
  const ExperimentConfig b = parse_config("# nothing here\n\n");
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 16);
  CHECK(a.env.mode == EnvMode::autocallable);
  CHECK(a.env.kappa == 0.02);
  CHECK(a.market.rho == -0.4);
  CHECK(a.note.coupon_rate == 0.0095);
  CHECK(a.trainer.n_quantiles == 100);
  CHECK(a.seeds.train == 1);
  CHECK(a.canonical().find("env.kappa = ") != std::string::npos);
}

TEST_CASE("sections, comments and value types") {
  const ExperimentConfig c = parse_config(R"(
[env]
mode = "vanilla_flow"   # switches env defaults
kappa = 0.01
early_exercise = false

[trainer]
actor_hidden = [32, 16]
objective = "var95"
episodes = 123

[seeds]
eval = 77
)");
  CHECK(c.env.mode == EnvMode::vanilla_flow);
  CHECK(c.env.max_hedge_multiplier == 1.0);
  CHECK(c.env.kappa == 0.01);
  CHECK_FALSE(c.env.early_exercise);
  CHECK(c.trainer.actor_hidden == std::vector<int>{32, 16});
  CHECK(c.trainer.objective == drl::Objective::var95);
  CHECK(c.trainer.episodes == 123);
  CHECK(c.seeds.eval == 77);
}

TEST_CASE("invalid values name the key") {
  CHECK_THROWS_WITH_AS(parse_config("[env]\nkappa = -0.1\n"), doctest::Contains("env.kappa"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[note]\nterm = 0\n"), doctest::Contains("note.term"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[market]\nrho = 2\n"), doctest::Contains("market.rho"), ConfigError);
}

TEST_CASE("unknown keys and type mismatches") {
  CHECK_THROWS_WITH_AS(parse_config("[env]\nkapa = 0.1\n"), doctest::Contains("env.kapa"), ConfigError);
  CHECK_THROWS_AS(parse_config("[trainer]\nbatch = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[trainer]\nbatch = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nearly_exercise = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nkappa = 0.1\nkappa = 0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env\nkappa = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[env]\nkappa\n"), ConfigError);
}

TEST_CASE("overrides change the fingerprint") {
  ExperimentConfig c = parse_config("");
  const std::string before = c.fingerprint();
  apply_override(c, "trainer.episodes=500");
  CHECK(c.trainer.episodes == 500);
  CHECK(c.fingerprint() != before);
  apply_override(c, "trainer.episodes=40000");
  CHECK(c.fingerprint() == before);
  apply_override(c, "output.dir=/tmp/elsewhere");
  CHECK(c.fingerprint() == before);
  CHECK_THROWS_AS(apply_override(c, "trainer.episodes"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nope.key=1"), ConfigError);
}

TEST_CASE("files") {
  const std::string path = "test_config_tmp.toml";
  {
    std::ofstream out(path);
    out << "[pricer]\nn_mc_paths = 500\nvaluation_cache = true\n";
  }
  const ExperimentConfig c = load_config(path);
  CHECK(c.pricer.n_mc_paths == 500);
  CHECK(c.pricer.valuation_cache);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
