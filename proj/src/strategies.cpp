#include "autohedge/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "autohedge/drl/mlp.hpp"

namespace autohedge {

Strategy Strategy::none() { return Strategy(StrategyKind::none, 0.0, nullptr, "none"); }

Strategy Strategy::delta_neutral() {
  return Strategy(StrategyKind::delta_neutral, 0.0, nullptr, "delta");
}

Strategy Strategy::delta_gamma_neutral() {
  return Strategy(StrategyKind::delta_gamma_neutral, 0.0, nullptr, "delta-gamma");
}

Strategy Strategy::constant_fraction(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("constant fraction must be in [0, 1]");
  std::ostringstream name;
  name << "const:" << c;
  return Strategy(StrategyKind::constant_fraction, c, nullptr, name.str());
}

Strategy Strategy::rl_policy(std::shared_ptr<const drl::Mlp> actor, std::string label) {
  if (!actor) throw std::invalid_argument("rl strategy needs an actor network");
  return Strategy(StrategyKind::rl_policy, 0.0, std::move(actor), std::move(label));
}

Strategy Strategy::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "delta") return delta_neutral();
  if (text == "delta-gamma") return delta_gamma_neutral();
  if (text.rfind("const:", 0) == 0) {
    const std::string num = text.substr(6);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size()) {
      throw std::invalid_argument("bad constant fraction in strategy '" + text + "'");
    }
    return constant_fraction(c);
  }
  throw std::invalid_argument("unknown strategy '" + text +
                              "' (expected none, delta, delta-gamma, const:<c> or rl:<file>)");
}

StrategyAction Strategy::act(const Observation& obs, const EnvConfig& config) const {
  StrategyAction out;
  switch (kind_) {
    case StrategyKind::none:
    case StrategyKind::delta_neutral:
      out.action = 0.0;
      break;
    case StrategyKind::delta_gamma_neutral: {
      const double a = 1.0 / config.max_hedge_multiplier;
      out.action = std::min(a, 1.0);
      out.clipped = a > 1.0;
      break;
    }
    case StrategyKind::constant_fraction:
      out.action = fraction_;
      break;
    case StrategyKind::rl_policy: {
      const double a = actor_->forward(obs.features)[0];
      out.action = std::clamp(a, 0.0, 1.0);
      out.clipped = out.action != a;
      break;
    }
  }
  return out;
}

std::string Strategy::label() const { return label_; }

double EpisodeTrace::pnl() const {
  double total = 0.0;
  for (const auto& r : rows) total += r.reward;
  return total;
}

namespace {

void accumulate_ratio(const EpisodeTrace& trace, double& offset, double& client) {
  for (const auto& r : trace.rows) {
    if (r.gamma_client == 0.0) continue;
    offset += r.gamma_client > 0.0 ? -r.gamma_hedge : r.gamma_hedge;
    client += std::abs(r.gamma_client);
  }
}

}  // namespace

double gamma_ratio(const EpisodeTrace& trace) {
  double offset = 0.0;
  double client = 0.0;
  accumulate_ratio(trace, offset, client);
  return client > 0.0 ? offset / client : 0.0;
}

double gamma_ratio(const std::vector<EpisodeTrace>& traces) {
  double offset = 0.0;
  double client = 0.0;
  for (const auto& t : traces) accumulate_ratio(t, offset, client);
  return client > 0.0 ? offset / client : 0.0;
}

EpisodeTrace run_episode(HedgingEnv& env, const Strategy& strategy, std::uint64_t seed) {
  EpisodeTrace trace;
  trace.seed = seed;
  Observation obs = env.reset(seed);
  trace.initial_value = env.initial_value();
  while (!env.state().done) {
    const double t = env.state().t;
    const double spot = env.state().spot;
    const StrategyAction a = strategy.act(obs, env.config());
    const Transition tr = env.step_full(a.action, strategy.trades());
    const StepInfo& info = env.last_info();
    TraceRow row;
    row.step = env.state().step - 1;
    row.time = t;
    row.spot = spot;
    row.action = tr.action;
    row.units = info.trade.units;
    row.reward = tr.reward;
    row.portfolio_value = info.value_after;
    row.gamma_client = info.gamma_client;
    row.gamma_hedge = info.gamma_hedge;
    row.done = tr.done;
    trace.rows.push_back(row);
    obs = tr.next_obs;
  }
  return trace;
}

void write_trace_csv(const EpisodeTrace& trace, std::ostream& out) {
  out << "step,time,spot,action,units,reward,portfolio_value,gamma_client,gamma_hedge,done\n";
  const auto prec = out.precision(12);
  for (const auto& r : trace.rows) {
    out << r.step << ',' << r.time << ',' << r.spot << ',' << r.action << ',' << r.units << ','
        << r.reward << ',' << r.portfolio_value << ',' << r.gamma_client << ',' << r.gamma_hedge
        << ',' << (r.done ? 1 : 0) << '\n';
  }
  out.precision(prec);
}

}  // namespace autohedge
