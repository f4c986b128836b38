#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "autohedge/cli.hpp"

using namespace autohedge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("autohedge_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kFastVanilla{"--set", "env.mode=vanilla_flow", "--set",
                                            "pricer.lsmc_training_paths=2000", "--set",
                                            "pricer.env_tree_steps=50"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("price a note in a deterministic market") {
  const fs::path dir = scratch("price");
  const Run r = run({"price", "--instrument", "note", "--vol", "0", "--set", "market.nu=0", "--out",
                     dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["price"].get<double>() == doctest::Approx(105.70).epsilon(1e-9));
  CHECK(fs::exists(dir / "price.json"));
  CHECK(j.contains("config_fingerprint"));
}

TEST_CASE("price a vanilla option") {
  const fs::path dir = scratch("price_put");
  const Run r = run({"price", "--instrument", "european_put", "--strike", "100", "--maturity", "1",
                     "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["price"].get<double>() == doctest::Approx(7.965567455405804).epsilon(1e-9));
  CHECK(j["delta"].get<double>() < 0.0);
}

TEST_CASE("simulate-pnl is reproducible") {
  const fs::path a = scratch("pnl_a");
  const fs::path b = scratch("pnl_b");
  const auto args = with({"simulate-pnl", "--strategy", "const:0.5", "--episodes", "6", "--threads",
                          "2", "--traces", "1"},
                         kFastVanilla);
  const Run ra = run(with(args, {"--out", a.string()}));
  auto single = args;
  single[6] = "1";
  const Run rb = run(with(single, {"--out", b.string()}));
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a / "pnl_const_0.5.csv") == slurp(b / "pnl_const_0.5.csv"));
  CHECK(fs::exists(a / "report_const_0.5.json"));
  CHECK(fs::exists(a / "histogram_const_0.5.csv"));
  CHECK(fs::exists(a / "trace_const_0.5_0.csv"));
  const auto rep = nlohmann::json::parse(slurp(a / "report_const_0.5.json"));
  CHECK(rep[0]["n"] == 6);
  CHECK(rep[0]["gamma_ratio"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("report compares delta and delta-gamma") {
  const fs::path dir = scratch("report");
  for (const char* s : {"delta", "delta-gamma"}) {
    const Run r = run(with({"simulate-pnl", "--strategy", s, "--episodes", "4", "--out", dir.string()},
                           kFastVanilla));
    REQUIRE(r.code == 0);
  }
  const Run r = run({"report", "--compare", (dir / "report_delta.json").string(),
                     (dir / "report_delta-gamma.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Gamma Ratio") != std::string::npos);
  const std::string csv = slurp(dir / "report.csv");
  std::istringstream in(csv);
  std::string header, delta, dg;
  std::getline(in, header);
  std::getline(in, delta);
  std::getline(in, dg);
  CHECK(delta.rfind("delta,", 0) == 0);
  CHECK(delta.substr(delta.rfind(',') + 1) == "0");
  CHECK(std::stod(dg.substr(dg.rfind(',') + 1)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simulate and greeks-profile outputs") {
  const fs::path dir = scratch("sim");
  REQUIRE(run({"simulate", "--paths", "3", "--steps", "5", "--out", dir.string()}).code == 0);
  CHECK(fs::exists(dir / "paths.csv"));
  const Run g = run({"greeks-profile", "--days", "5", "--spot-min", "95", "--spot-max", "105",
                     "--spot-step", "5", "--set", "pricer.n_mc_paths=200", "--out", dir.string()});
  REQUIRE(g.code == 0);
  const std::string csv = slurp(dir / "greeks_profile.csv");
  CHECK(csv.find("spot,days_before_call,value,delta,gamma") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run({"simulate", "--set", "env.kappa=-0.1", "--out", dir.string()}).code == exit_config_error);
  CHECK(run({"simulate", "--set", "env.kapa=0.1", "--out", dir.string()}).code == exit_config_error);
  CHECK(run({"simulate", "--config", "/nonexistent/cfg.toml"}).code == exit_config_error);
  CHECK(run({"bogus"}).code == exit_config_error);
  CHECK(run({"simulate-pnl", "--strategy", "gamma", "--out", dir.string()}).code == exit_config_error);
  const Run missing = run({"evaluate", "--policy", (dir / "none.json").string(), "--out", dir.string()});
  CHECK(missing.code == exit_runtime_error);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"evaluate", "--out", dir.string()}).code != 0);
  CHECK(run({"price", "--instrument", "note", "--t", "9", "--out", dir.string()}).code == exit_runtime_error);
}

TEST_CASE("train then evaluate a tiny policy") {
  const fs::path dir = scratch("train");
  const auto tiny = with({"--set", "trainer.episodes=8", "--set", "trainer.batch=16", "--set",
                          "trainer.actor_hidden=[8]", "--set", "trainer.critic_hidden=[8]", "--set",
                          "trainer.n_quantiles=5", "--set", "trainer.workers=2", "--out", dir.string()},
                         kFastVanilla);
  const Run t = run(with({"train"}, tiny));
  REQUIRE(t.code == 0);
  CHECK(fs::exists(dir / "policy.json"));
  CHECK(fs::exists(dir / "curve.csv"));
  const Run e = run(with({"evaluate", "--policy", (dir / "policy.json").string(), "--episodes", "3"}, tiny));
  REQUIRE(e.code == 0);
  CHECK(e.err.find("warning") == std::string::npos);
  CHECK(fs::exists(dir / "report_rl.json"));
  const Run m = run(with({"evaluate", "--policy", (dir / "policy.json").string(), "--episodes", "3",
                          "--set", "env.kappa=0.05"},
                         tiny));
  CHECK(m.code == 0);
  CHECK(m.err.find("warning") != std::string::npos);
}

TEST_CASE("mode overrides apply before other env overrides") {
  const fs::path dir = scratch("order");
  const auto fp = [&](std::vector<std::string> sets) {
    std::vector<std::string> args{"price", "--instrument", "european_call", "--out", dir.string()};
    for (const auto& s : sets) {
      args.push_back("--set");
      args.push_back(s);
    }
    const Run r = run(args);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out)["config_fingerprint"].get<std::string>();
  };
  CHECK(fp({"env.kappa=0.05", "env.mode=vanilla_flow"}) == fp({"env.mode=vanilla_flow", "env.kappa=0.05"}));
  CHECK(fp({"env.kappa=0.05", "env.mode=vanilla_flow"}) != fp({"env.mode=vanilla_flow"}));
}
