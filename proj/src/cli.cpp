#include "autohedge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "autohedge/config.hpp"
#include "autohedge/drl/trainer.hpp"
#include "autohedge/env.hpp"
#include "autohedge/lsmc.hpp"
#include "autohedge/pricing.hpp"
#include "autohedge/risk.hpp"
#include "autohedge/strategies.hpp"

namespace autohedge {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Common {
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Seed for this command (overrides the config seed)");
  sub->add_option("--config", c.config, "Experiment config file");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--set", c.overrides, "Config override section.key=value (repeatable)");
}

struct Context {
  ExperimentConfig cfg;
  std::string fingerprint;
  std::uint64_t seed = 0;
  fs::path out_dir;
  int threads = 1;
};

Context make_context(const Common& c, bool training_seed) {
  Context ctx;
  ctx.cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  std::vector<std::string> overrides = c.overrides;
  std::stable_partition(overrides.begin(), overrides.end(), [](const std::string& o) {
    return o.rfind("env.mode=", 0) == 0 || o.rfind("env.mode =", 0) == 0;
  });
  for (const auto& o : overrides) apply_override(ctx.cfg, o);
  if (c.seed) {
    if (training_seed) {
      ctx.cfg.seeds.train = *c.seed;
    } else {
      ctx.cfg.seeds.eval = *c.seed;
    }
  }
  ctx.cfg.validate();
  ctx.seed = training_seed ? ctx.cfg.seeds.train : ctx.cfg.seeds.eval;
  ctx.fingerprint = ctx.cfg.fingerprint();
  ctx.out_dir = c.out.empty() ? fs::path(ctx.cfg.output_dir) : fs::path(c.out);
  ctx.threads = c.threads;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

std::string header(const std::string& command, const Context& ctx) {
  return "# autohedge " + command + "\n# config_fingerprint=" + ctx.fingerprint +
         "\n# seed=" + std::to_string(ctx.seed) + "\n";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

std::string file_label(const std::string& label) {
  std::string s = label;
  for (char& ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      ch = '_';
    }
  }
  return s;
}

template <typename Fn>
void parallel_for(int threads, long n, Fn&& fn) {
  const int t = static_cast<int>(std::max(1L, std::min<long>(threads, n)));
  if (t == 1) {
    for (long i = 0; i < n; ++i) fn(0, i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < n; i += t) fn(w, i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::shared_ptr<const EnvResources> env_resources(const ExperimentConfig& cfg) {
  return std::make_shared<const EnvResources>(
      make_env_resources(cfg.env, cfg.market, cfg.note, cfg.pricer, cfg.seeds.train));
}

std::unique_ptr<HedgingEnv> make_env(const ExperimentConfig& cfg, const EnvResources& res) {
  return std::make_unique<HedgingEnv>(cfg.env, cfg.market, cfg.note, cfg.pricer, res.note_valuer,
                                      res.exercise);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  long paths = 10;
  int steps = 0;
  double dt = 0.0;
};

void cmd_simulate(const Context& ctx, const SimulateArgs& a, std::ostream& out) {
  TimeGrid grid;
  grid.dt = a.dt > 0.0 ? a.dt : ctx.cfg.env.dt;
  grid.n_steps = a.steps > 0 ? a.steps : static_cast<int>(std::lround(ctx.cfg.env.horizon / grid.dt));
  const PathSet ps = simulate_paths(ctx.cfg.market, grid, a.paths, RngStream(ctx.seed, 0));
  const fs::path path = ctx.out_dir / "paths.csv";
  auto f = open_out(path);
  f << header("simulate", ctx);
  write_paths_csv(ps, f);
  out << "wrote " << path.string() << '\n';
}

// ---------------------------------------------------------------- price

struct PriceArgs {
  std::string instrument = "note";
  std::optional<double> spot;
  std::optional<double> vol;
  double t = 0.0;
  std::optional<double> strike;
  std::optional<double> maturity;
};

void cmd_price(const Context& ctx, const PriceArgs& a, std::ostream& out) {
  const auto& cfg = ctx.cfg;
  const double spot = a.spot.value_or(cfg.market.spot0);
  const double vol = a.vol.value_or(cfg.market.sigma0);
  if (!(spot > 0.0)) throw std::invalid_argument("--spot must be > 0");
  if (!(vol >= 0.0)) throw std::invalid_argument("--vol must be >= 0");
  Valuation v;
  if (a.instrument == "note") {
    v = price_autocallable_mc(cfg.note, spot, vol, a.t, cfg.market, cfg.pricer,
                              RngStream(ctx.seed, 0x7072696365ULL));
  } else {
    OptionSpec o;
    o.kind = option_kind_from_string(a.instrument);
    o.strike = a.strike.value_or(cfg.market.spot0);
    o.maturity = a.maturity.value_or(a.t + 1.0);
    const double lv = vol * std::pow(spot, cfg.market.beta - 1.0);
    v = option_valuation(o, spot, lv, cfg.pricer.rate, a.t, cfg.pricer.binomial_steps);
  }
  ordered_json j;
  j["instrument"] = a.instrument;
  j["spot"] = spot;
  j["vol"] = vol;
  j["t"] = a.t;
  j["price"] = v.price;
  j["delta"] = v.delta;
  j["gamma"] = v.gamma;
  j["std_error"] = v.std_error;
  j["config_fingerprint"] = ctx.fingerprint;
  j["seed"] = ctx.seed;
  const std::string text = j.dump(2);
  auto f = open_out(ctx.out_dir / "price.json");
  f << text << '\n';
  out << text << '\n';
}

// ---------------------------------------------------------------- greeks-profile

struct ProfileArgs {
  std::vector<int> days{60, 5, 1};
  double spot_min = 50.0;
  double spot_max = 150.0;
  double spot_step = 1.0;
};

void cmd_greeks_profile(const Context& ctx, const ProfileArgs& a, std::ostream& out) {
  const auto& cfg = ctx.cfg;
  if (!(a.spot_step > 0.0) || !(a.spot_max >= a.spot_min) || !(a.spot_min > 0.0)) {
    throw std::invalid_argument("bad spot range");
  }
  const double first_call = cfg.note.autocall_frequency / 12.0;
  std::vector<double> spots;
  const long n_spots = std::lround(std::floor((a.spot_max - a.spot_min) / a.spot_step + 1e-9)) + 1;
  for (long i = 0; i < n_spots; ++i) spots.push_back(a.spot_min + i * a.spot_step);
  struct Row {
    int days;
    double t;
    double spot;
    Valuation v;
  };
  std::vector<Row> rows;
  for (int d : a.days) {
    const double t = first_call - d / 252.0;
    if (t < 0.0) throw std::invalid_argument("--days reaches before issue: " + std::to_string(d));
    for (double s : spots) rows.push_back(Row{d, t, s, {}});
  }
  parallel_for(ctx.threads, static_cast<long>(rows.size()), [&](int, long i) {
    Row& r = rows[static_cast<std::size_t>(i)];
    const RngStream rng(ctx.seed, mix64(0x67726b73ULL ^ static_cast<std::uint64_t>(r.days)));
    r.v = price_autocallable_mc(cfg.note, r.spot, cfg.market.sigma0, r.t, cfg.market, cfg.pricer,
                                rng);
  });
  const fs::path path = ctx.out_dir / "greeks_profile.csv";
  auto f = open_out(path);
  f << header("greeks-profile", ctx);
  f << "spot,days_before_call,value,delta,gamma\n";
  f << std::setprecision(12);
  for (const auto& r : rows) {
    f << r.spot << ',' << r.days << ',' << r.v.price << ',' << r.v.delta << ',' << r.v.gamma << '\n';
  }
  out << "wrote " << path.string() << '\n';
}

// ---------------------------------------------------------------- simulate-pnl / evaluate

struct PnlArgs {
  std::string strategy = "delta";
  std::string policy;
  long episodes = 100;
  int bins = 50;
  int traces = 0;
  std::string label;
};

void run_pnl(const Context& ctx, const Strategy& strategy, const PnlArgs& a,
             const std::string& command, std::ostream& out) {
  if (a.episodes < 1) throw std::invalid_argument("--episodes must be >= 1");
  const auto res = env_resources(ctx.cfg);
  const int t = static_cast<int>(std::max(1L, std::min<long>(ctx.threads, a.episodes)));
  std::vector<std::unique_ptr<HedgingEnv>> envs;
  for (int w = 0; w < t; ++w) envs.push_back(make_env(ctx.cfg, *res));
  std::vector<EpisodeTrace> traces(static_cast<std::size_t>(a.episodes));
  parallel_for(t, a.episodes, [&](int w, long i) {
    const std::uint64_t s = drl::episode_seed(ctx.seed, static_cast<std::uint64_t>(i), true);
    traces[static_cast<std::size_t>(i)] = run_episode(*envs[static_cast<std::size_t>(w)], strategy, s);
  });

  std::vector<double> pnl;
  for (const auto& tr : traces) pnl.push_back(tr.pnl());
  const std::string label = a.label.empty() ? strategy.label() : a.label;
  const risk::RiskReport rep = risk::report(pnl, gamma_ratio(traces), label);
  const std::string stem = file_label(label);

  {
    auto f = open_out(ctx.out_dir / ("pnl_" + stem + ".csv"));
    f << header(command, ctx);
    f << "episode,seed,pnl,gamma_ratio\n" << std::setprecision(17);
    for (std::size_t i = 0; i < traces.size(); ++i) {
      f << i << ',' << traces[i].seed << ',' << pnl[i] << ',' << gamma_ratio(traces[i]) << '\n';
    }
  }
  {
    auto f = open_out(ctx.out_dir / ("report_" + stem + ".json"));
    f << risk::report_json({rep}, risk::SeedSet{ctx.seed, a.episodes}, ctx.fingerprint) << '\n';
  }
  {
    auto f = open_out(ctx.out_dir / ("histogram_" + stem + ".csv"));
    f << header(command, ctx);
    risk::write_histogram_csv(risk::histogram(pnl, a.bins), f);
  }
  for (int k = 0; k < a.traces && k < static_cast<int>(traces.size()); ++k) {
    auto f = open_out(ctx.out_dir / ("trace_" + stem + "_" + std::to_string(k) + ".csv"));
    f << header(command, ctx);
    write_trace_csv(traces[static_cast<std::size_t>(k)], f);
  }
  out << std::fixed << std::setprecision(4) << label << ": mean " << rep.mean << " std " << rep.std
      << " var95 " << rep.var95 << " cvar95 " << rep.cvar95 << " gamma_ratio " << rep.gamma_ratio
      << " (" << rep.n << " episodes)\n"
      << std::defaultfloat;
}

// ---------------------------------------------------------------- fit-lsmc

struct LsmcArgs {
  std::string kind = "american_put";
  std::optional<double> strike;
  double maturity = 1.0;
  double exercise_dt = 1.0 / 12.0;
};

void cmd_fit_lsmc(const Context& ctx, const LsmcArgs& a, std::ostream& out) {
  const auto& cfg = ctx.cfg;
  const OptionKind kind = option_kind_from_string(a.kind);
  if (!is_american(kind)) throw std::invalid_argument("--kind must be american_call or american_put");
  const double strike = a.strike.value_or(cfg.market.spot0);
  SabrParams q = cfg.market;
  q.mu = cfg.pricer.rate;
  TimeGrid grid;
  grid.dt = a.exercise_dt;
  grid.n_steps = static_cast<int>(std::lround(a.maturity / a.exercise_dt));
  if (grid.n_steps < 1 || std::abs(grid.n_steps * grid.dt - a.maturity) > 1e-9) {
    throw std::invalid_argument("--maturity must be a multiple of --exercise-dt");
  }
  const long n = cfg.pricer.lsmc_training_paths;
  const PathSet train = simulate_paths(q, grid, n, RngStream(ctx.seed, 0x666974ULL));
  const std::vector<double> strikes{strike};
  const ContinuationModel model = lsmc_fit(train, kind, strikes, a.maturity, cfg.pricer.rate, cfg.pricer);
  const PathSet test = simulate_paths(q, grid, n, RngStream(ctx.seed, 0x74657374ULL));
  const LsmcPrice lp = lsmc_price(model, test, strike);
  const double tree = binomial_american(kind, cfg.market.spot0, strike, cfg.market.sigma0,
                                        cfg.pricer.rate, a.maturity, cfg.pricer.binomial_steps);
  const Valuation euro =
      bs_european(kind, cfg.market.spot0, strike, cfg.market.sigma0, cfg.pricer.rate, a.maturity);

  ordered_json j;
  j["kind"] = a.kind;
  j["strike"] = strike;
  j["maturity"] = a.maturity;
  j["rate"] = cfg.pricer.rate;
  j["degree"] = model.degree;
  j["reduced_degree"] = model.reduced_degree;
  j["exercise_times"] = model.exercise_times;
  j["coefficients"] = model.coefficients;
  j["lsmc_price"] = lp.price;
  j["lsmc_std_error"] = lp.std_error;
  j["binomial_price"] = tree;
  j["european_price"] = euro.price;
  j["config_fingerprint"] = ctx.fingerprint;
  j["seed"] = ctx.seed;
  const fs::path path = ctx.out_dir / ("lsmc_" + a.kind + ".json");
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  out << std::setprecision(6) << a.kind << " K=" << strike << ": lsmc " << lp.price << " +- "
      << lp.std_error << ", binomial " << tree << ", european " << euro.price << '\n';
}

// ---------------------------------------------------------------- train

void cmd_train(const Context& ctx, std::ostream& out, std::ostream& err) {
  const auto res = env_resources(ctx.cfg);
  const ExperimentConfig cfg = ctx.cfg;
  EnvFactory factory = [cfg, res]() -> std::unique_ptr<Environment> { return make_env(cfg, *res); };
  drl::TrainerConfig tc = cfg.trainer;
  tc.seed = ctx.seed;
  const long report_every = std::max<long>(1, tc.episodes / 20);
  drl::TrainResult result = drl::train(factory, tc, ctx.threads, [&](long done) {
    if (done % report_every < tc.workers || done == tc.episodes) {
      err << "train: " << done << "/" << tc.episodes << " episodes\n";
    }
  });
  result.policy.config_fingerprint = ctx.fingerprint;
  const fs::path policy_path = ctx.out_dir / "policy.json";
  result.policy.save(policy_path.string());
  auto f = open_out(ctx.out_dir / "curve.csv");
  f << header("train", ctx);
  drl::write_curve_csv(result.curve, f);
  out << "wrote " << policy_path.string() << " after " << result.gradient_steps
      << " gradient steps over " << result.transitions << " transitions\n";
}

// ---------------------------------------------------------------- report

std::string cell(const ordered_json& row, const char* key) {
  const auto it = row.find(key);
  if (it == row.end() || it->is_null()) return "";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << it->get<double>();
  return s.str();
}

void cmd_report(const Context& ctx, const std::vector<std::string>& files, std::ostream& out) {
  if (files.empty()) throw std::invalid_argument("report needs --compare <report.json>...");
  std::vector<ordered_json> rows;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read report '" + path + "'");
    ordered_json j = ordered_json::parse(in);
    if (!j.is_array()) j = ordered_json::array({j});
    for (auto& r : j) rows.push_back(r);
  }
  static const std::vector<std::pair<const char*, const char*>> columns{
      {"Mean", "mean"},          {"Std", "std"},        {"Mean-Std", "mean_minus_1p645_std"},
      {"5%VaR", "var5"},         {"5%CVaR", "cvar5"},   {"95%VaR", "var95"},
      {"95%CVaR", "cvar95"},     {"Gamma Ratio", "gamma_ratio"}};
  std::ostringstream table;
  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.value("strategy", std::string{}).size());
  table << std::left << std::setw(static_cast<int>(width)) << "Strategy";
  for (const auto& [title, key] : columns) table << " & " << std::right << std::setw(11) << title;
  table << " \\\\\n";
  for (const auto& r : rows) {
    table << std::left << std::setw(static_cast<int>(width)) << r.value("strategy", std::string{});
    for (const auto& [title, key] : columns) table << " & " << std::right << std::setw(11) << cell(r, key);
    table << " \\\\\n";
  }
  out << table.str();
  auto f = open_out(ctx.out_dir / "report.csv");
  f << "strategy";
  for (const auto& [title, key] : columns) f << ',' << title;
  f << "\n" << std::setprecision(17);
  for (const auto& r : rows) {
    f << r.value("strategy", std::string{});
    for (const auto& [title, key] : columns) {
      f << ',';
      const auto it = r.find(key);
      if (it != r.end() && !it->is_null()) f << it->get<double>();
    }
    f << '\n';
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hedging laboratory for autocallable notes and vanilla option flow"};
  app.require_subcommand(1);
  Common common;

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Write simulated market paths");
  add_common(s_sim, common);
  s_sim->add_option("--paths", sim.paths)->check(CLI::PositiveNumber);
  s_sim->add_option("--steps", sim.steps)->check(CLI::PositiveNumber);
  s_sim->add_option("--dt", sim.dt)->check(CLI::PositiveNumber);

  PriceArgs price;
  auto* s_price = app.add_subcommand("price", "Value one instrument");
  add_common(s_price, common);
  s_price->add_option("--instrument", price.instrument,
                      "note, american_call, american_put, european_call, european_put, "
                      "digital_cash_call, digital_cash_put");
  s_price->add_option("--spot", price.spot);
  s_price->add_option("--vol", price.vol);
  s_price->add_option("--t", price.t, "Valuation time in years since issue");
  s_price->add_option("--strike", price.strike);
  s_price->add_option("--maturity", price.maturity, "Option maturity in years since issue");

  ProfileArgs prof;
  auto* s_prof = app.add_subcommand("greeks-profile", "Note Greeks across spots before the first call date");
  add_common(s_prof, common);
  s_prof->add_option("--days", prof.days, "Trading days before the first call date")->delimiter(',');
  s_prof->add_option("--spot-min", prof.spot_min);
  s_prof->add_option("--spot-max", prof.spot_max);
  s_prof->add_option("--spot-step", prof.spot_step);

  PnlArgs pnl;
  auto* s_pnl = app.add_subcommand("simulate-pnl", "Run a hedging strategy over evaluation episodes");
  add_common(s_pnl, common);
  s_pnl->add_option("--strategy", pnl.strategy, "none|delta|delta-gamma|const:<c>|rl:<policy-file>");
  s_pnl->add_option("--episodes", pnl.episodes)->check(CLI::PositiveNumber);
  s_pnl->add_option("--bins", pnl.bins)->check(CLI::PositiveNumber);
  s_pnl->add_option("--traces", pnl.traces, "Write step traces of the first N episodes");
  s_pnl->add_option("--label", pnl.label);

  LsmcArgs lsmc;
  auto* s_lsmc = app.add_subcommand("fit-lsmc", "Fit and test a Longstaff-Schwartz exercise rule");
  add_common(s_lsmc, common);
  s_lsmc->add_option("--kind", lsmc.kind);
  s_lsmc->add_option("--strike", lsmc.strike);
  s_lsmc->add_option("--maturity", lsmc.maturity)->check(CLI::PositiveNumber);
  s_lsmc->add_option("--exercise-dt", lsmc.exercise_dt)->check(CLI::PositiveNumber);

  auto* s_train = app.add_subcommand("train", "Train the distributional actor-critic");
  add_common(s_train, common);

  PnlArgs eval;
  eval.label = "rl";
  auto* s_eval = app.add_subcommand("evaluate", "Evaluate a trained policy");
  add_common(s_eval, common);
  s_eval->add_option("--policy", eval.policy)->required();
  s_eval->add_option("--episodes", eval.episodes)->check(CLI::PositiveNumber);
  s_eval->add_option("--bins", eval.bins)->check(CLI::PositiveNumber);
  s_eval->add_option("--traces", eval.traces);
  s_eval->add_option("--label", eval.label);

  std::vector<std::string> compare;
  auto* s_report = app.add_subcommand("report", "Side-by-side table of risk reports");
  add_common(s_report, common);
  s_report->add_option("--compare", compare, "Report JSON files")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }

  Context ctx;
  try {
    ctx = make_context(common, s_train->parsed());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    if (s_sim->parsed()) {
      cmd_simulate(ctx, sim, out);
    } else if (s_price->parsed()) {
      cmd_price(ctx, price, out);
    } else if (s_prof->parsed()) {
      cmd_greeks_profile(ctx, prof, out);
    } else if (s_pnl->parsed()) {
      if (pnl.strategy.rfind("rl:", 0) == 0) {
        const auto snap = drl::PolicySnapshot::load(pnl.strategy.substr(3));
        if (pnl.label.empty()) pnl.label = "rl";
        run_pnl(ctx, Strategy::rl_policy(std::make_shared<drl::Mlp>(snap.actor), pnl.label), pnl,
                "simulate-pnl", out);
      } else {
        Strategy strategy = Strategy::none();
        try {
          strategy = Strategy::parse(pnl.strategy);
        } catch (const std::invalid_argument& e) {
          err << "error: " << e.what() << '\n';
          return exit_config_error;
        }
        run_pnl(ctx, strategy, pnl, "simulate-pnl", out);
      }
    } else if (s_lsmc->parsed()) {
      cmd_fit_lsmc(ctx, lsmc, out);
    } else if (s_train->parsed()) {
      cmd_train(ctx, out, err);
    } else if (s_eval->parsed()) {
      const auto snap = drl::PolicySnapshot::load(eval.policy);
      if (!snap.config_fingerprint.empty() && snap.config_fingerprint != ctx.fingerprint) {
        err << "warning: policy was trained under config " << snap.config_fingerprint
            << ", evaluating under " << ctx.fingerprint << '\n';
      }
      run_pnl(ctx, Strategy::rl_policy(std::make_shared<drl::Mlp>(snap.actor), eval.label), eval,
              "evaluate", out);
    } else if (s_report->parsed()) {
      cmd_report(ctx, compare, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime_error;
  }
  return exit_ok;
}

}  // namespace autohedge
