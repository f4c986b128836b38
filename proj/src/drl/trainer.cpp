#include "autohedge/drl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>
#include "autohedge/risk.hpp"

namespace autohedge::drl {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrainTag = 0x747261696eULL;
constexpr std::uint64_t kEvalTag = 0x6576616cULL;
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;

json mlp_to_json(const Mlp& net) {
  json j;
  j["layer_sizes"] = net.layer_sizes();
  j["output"] = net.output_activation() == OutputActivation::sigmoid ? "sigmoid" : "identity";
  json ws = json::array();
  json bs = json::array();
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    const auto& w = net.weights()[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    ws.push_back(flat);
    const auto& b = net.biases()[l];
    bs.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j["weights"] = ws;
  j["biases"] = bs;
  return j;
}

Mlp mlp_from_json(const json& j) {
  const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto out_name = j.at("output").get<std::string>();
  OutputActivation out;
  if (out_name == "sigmoid") {
    out = OutputActivation::sigmoid;
  } else if (out_name == "identity") {
    out = OutputActivation::identity;
  } else {
    throw std::invalid_argument("unknown output activation '" + out_name + "'");
  }
  Mlp net = Mlp::zeros(sizes, out);
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  if (ws.size() != net.weights().size() || bs.size() != net.biases().size()) {
    throw std::invalid_argument("policy layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    auto& w = net.weights()[l];
    const auto flat = ws[l].get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(w.size())) {
      throw std::invalid_argument("policy weight matrix has the wrong size");
    }
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[k++];
    }
    auto& b = net.biases()[l];
    const auto bias = bs[l].get<std::vector<double>>();
    if (bias.size() != static_cast<std::size_t>(b.size())) {
      throw std::invalid_argument("policy bias vector has the wrong size");
    }
    for (std::size_t i = 0; i < bias.size(); ++i) b(static_cast<Eigen::Index>(i)) = bias[i];
  }
  return net;
}

template <typename Fn>
void run_parallel(int threads, int n_tasks, Fn&& fn) {
  const int t = std::max(1, std::min(threads, n_tasks));
  if (t == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n_tasks; i += t) fn(i);
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

double clamp01(double a) { return std::clamp(a, 0.0, 1.0); }

struct EpisodeLog {
  std::vector<std::vector<double>> obs;  // obs[t], plus the final observation
  std::vector<double> actions;
  std::vector<double> rewards;
};

std::vector<Experience> n_step_experiences(const EpisodeLog& log, int n_step, double discount) {
  const std::size_t T = log.actions.size();
  std::vector<Experience> out;
  out.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    Experience e;
    e.obs = log.obs[t];
    e.action = log.actions[t];
    double acc = 0.0;
    double g = 1.0;
    std::size_t i = 0;
    for (; i < static_cast<std::size_t>(n_step) && t + i < T; ++i) {
      acc += g * log.rewards[t + i];
      g *= discount;
    }
    e.reward = acc;
    if (t + i >= T) {
      e.discount = 0.0;
      e.next_obs = log.obs[T];
    } else {
      e.discount = g;
      e.next_obs = log.obs[t + i];
    }
    out.push_back(std::move(e));
  }
  return out;
}


}  // namespace

void TrainerConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("trainer: " + what); };
  if (!(discount > 0.0 && discount <= 1.0)) fail("discount must be in (0, 1]");
  if (batch < 1) fail("batch must be >= 1");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) fail("learning rates must be > 0");
  if (!(soft_update_coeff > 0.0 && soft_update_coeff <= 1.0)) fail("soft_update must be in (0, 1]");
  if (noise_std_start < 0.0 || noise_std_end < 0.0) fail("noise std must be >= 0");
  if (n_step < 1 || n_step > 5) fail("n_step must be in [1, 5]");
  if (episodes < 1) fail("episodes must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (actor_hidden.empty() || critic_hidden.empty()) fail("hidden layer lists must not be empty");
  if (n_quantiles < 1) fail("n_quantiles must be >= 1");
  if (replay_capacity < 1) fail("replay_capacity must be >= 1");
  if (!(huber_k > 0.0)) fail("huber_k must be > 0");
  if (!(updates_per_step > 0.0)) fail("updates_per_step must be > 0");
  if (!(reward_scale > 0.0)) fail("reward_scale must be > 0");
  if (warmup < 0) fail("warmup must be >= 0");
  if (curve_every < 1) fail("curve_every must be >= 1");
  if (curve_eval_episodes < 0) fail("curve_eval_episodes must be >= 0");
}

std::string PolicySnapshot::to_json() const {
  json j;
  j["format"] = "autohedge-policy-1";
  j["config_fingerprint"] = config_fingerprint;
  j["seed"] = seed;
  j["normalization"] = normalization;
  j["actor"] = mlp_to_json(actor);
  j["critic"] = mlp_to_json(critic);
  return j.dump();
}

PolicySnapshot PolicySnapshot::from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", std::string{}) != "autohedge-policy-1") {
    throw std::invalid_argument("not an autohedge policy file");
  }
  PolicySnapshot p;
  p.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.normalization = j.at("normalization").get<std::vector<double>>();
  p.actor = mlp_from_json(j.at("actor"));
  p.critic = mlp_from_json(j.at("critic"));
  return p;
}

void PolicySnapshot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy file '" + path + "'");
  out << to_json() << '\n';
  if (!out) throw std::runtime_error("failed writing policy file '" + path + "'");
}

PolicySnapshot PolicySnapshot::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read policy file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::uint64_t episode_seed(std::uint64_t base, std::uint64_t index, bool eval) {
  return mix64(mix64(base ^ (eval ? kEvalTag : kTrainTag)) + index);
}

Policy actor_policy(const Mlp& actor) {
  return [&actor](const Observation& obs) { return clamp01(actor.forward(obs.features)[0]); };
}

std::vector<double> evaluate(const Policy& policy, const EnvFactory& factory, long n_episodes,
                             std::uint64_t eval_seed, int threads) {
  if (n_episodes < 1) throw std::invalid_argument("evaluate needs n_episodes >= 1");
  const int t = static_cast<int>(std::max(1L, std::min<long>(threads, n_episodes)));
  std::vector<std::unique_ptr<Environment>> envs;
  for (int w = 0; w < t; ++w) envs.push_back(factory());
  std::vector<double> pnl(static_cast<std::size_t>(n_episodes), 0.0);
  run_parallel(t, t, [&](int w) {
    Environment& env = *envs[static_cast<std::size_t>(w)];
    for (long e = w; e < n_episodes; e += t) {
      Observation obs = env.reset(episode_seed(eval_seed, static_cast<std::uint64_t>(e), true));
      double total = 0.0;
      for (;;) {
        const StepResult r = env.step(policy(obs));
        total += r.reward;
        if (r.done) break;
        obs = r.next_obs;
      }
      pnl[static_cast<std::size_t>(e)] = total;
    }
  });
  return pnl;
}

std::vector<double> evaluate(const PolicySnapshot& policy, const EnvFactory& factory,
                             long n_episodes, std::uint64_t eval_seed, int threads) {
  return evaluate(actor_policy(policy.actor), factory, n_episodes, eval_seed, threads);
}

PolicySnapshot initial_policy(std::size_t observation_size, const TrainerConfig& config) {
  const int obs_size = static_cast<int>(observation_size);
  RngStream init_rng(config.seed, 0x696e6974ULL);
  std::vector<int> actor_sizes{obs_size};
  actor_sizes.insert(actor_sizes.end(), config.actor_hidden.begin(), config.actor_hidden.end());
  actor_sizes.push_back(1);
  std::vector<int> critic_sizes{obs_size + 1};
  critic_sizes.insert(critic_sizes.end(), config.critic_hidden.begin(), config.critic_hidden.end());
  critic_sizes.push_back(config.n_quantiles);
  PolicySnapshot p;
  p.actor = Mlp(actor_sizes, OutputActivation::sigmoid, init_rng);
  p.critic = Mlp(critic_sizes, OutputActivation::identity, init_rng);
  p.normalization = {config.reward_scale};
  p.seed = config.seed;
  return p;
}

TrainResult train(const EnvFactory& factory, const TrainerConfig& config, int threads,
                  const std::function<void(long)>& progress) {
  config.validate();
  const int n_workers = config.workers;
  std::vector<std::unique_ptr<Environment>> envs;
  for (int w = 0; w < n_workers; ++w) envs.push_back(factory());
  const int obs_size = static_cast<int>(envs.front()->observation_size());
  const int nq = config.n_quantiles;

  PolicySnapshot start = initial_policy(static_cast<std::size_t>(obs_size), config);
  Mlp actor = std::move(start.actor);
  Mlp critic = std::move(start.critic);
  Mlp actor_target = actor;
  Mlp critic_target_net = critic;
  Adam actor_opt(actor, config.actor_lr);
  Adam critic_opt(critic, config.critic_lr);

  ReplayBuffer buffer(static_cast<std::size_t>(config.replay_capacity));
  RngStream sample_rng(config.seed, 0x73616d70ULL);
  const std::vector<double> obj_w = objective_weights(config.objective, static_cast<std::size_t>(nq));
  const long warmup = config.warmup > 0 ? config.warmup : config.batch;
  const long noise_horizon = std::max<long>(1, config.episodes / 2);

  TrainResult result;
  double update_credit = 0.0;
  double window_loss = 0.0;
  double window_obj = 0.0;
  long window_n = 0;
  long next_curve = config.curve_every;

  auto gradient_step = [&]() {
    const auto B = static_cast<Eigen::Index>(config.batch);
    const auto idx = buffer.sample(static_cast<std::size_t>(config.batch), sample_rng);
    Eigen::MatrixXd x(obs_size + 1, B);
    Eigen::MatrixXd next_x(obs_size, B);
    for (Eigen::Index j = 0; j < B; ++j) {
      const Experience& e = buffer.at(idx[static_cast<std::size_t>(j)]);
      for (int i = 0; i < obs_size; ++i) {
        x(i, j) = e.obs[static_cast<std::size_t>(i)];
        next_x(i, j) = e.next_obs[static_cast<std::size_t>(i)];
      }
      x(obs_size, j) = e.action;
    }
    const Eigen::MatrixXd next_a = actor_target.forward(next_x);
    Eigen::MatrixXd next_xa(obs_size + 1, B);
    next_xa.topRows(obs_size) = next_x;
    next_xa.row(obs_size) = next_a.row(0);
    const Eigen::MatrixXd next_atoms = critic_target_net.forward(next_xa);

    Mlp::Tape ctape;
    const Eigen::MatrixXd atoms = critic.forward(x, ctape);
    Eigen::MatrixXd upstream(nq, B);
    double loss = 0.0;
    std::vector<double> a_col(static_cast<std::size_t>(nq));
    std::vector<double> next_col(static_cast<std::size_t>(nq));
    for (Eigen::Index j = 0; j < B; ++j) {
      const Experience& e = buffer.at(idx[static_cast<std::size_t>(j)]);
      for (int k = 0; k < nq; ++k) {
        a_col[static_cast<std::size_t>(k)] = atoms(k, j);
        next_col[static_cast<std::size_t>(k)] = next_atoms(k, j);
      }
      const auto targets = critic_target(e.reward * config.reward_scale, e.discount == 0.0,
                                         e.discount, next_col);
      const QuantileLoss ql = quantile_huber_loss(a_col, targets, config.huber_k);
      loss += ql.loss;
      for (int k = 0; k < nq; ++k) upstream(k, j) = ql.grad[static_cast<std::size_t>(k)] / B;
    }
    loss /= static_cast<double>(B);
    if (!std::isfinite(loss)) {
      throw TrainingDivergence("critic loss became non-finite after " +
                               std::to_string(result.gradient_steps) + " gradient steps");
    }
    critic_opt.step(critic, critic.backward(ctape, upstream));

    Mlp::Tape atape;
    const Eigen::MatrixXd a = actor.forward(x.topRows(obs_size), atape);
    Eigen::MatrixXd xa(obs_size + 1, B);
    xa.topRows(obs_size) = x.topRows(obs_size);
    xa.row(obs_size) = a.row(0);
    Mlp::Tape qtape;
    const Eigen::MatrixXd q = critic.forward(xa, qtape);
    Eigen::MatrixXd q_up(nq, B);
    double obj = 0.0;
    for (Eigen::Index j = 0; j < B; ++j) {
      for (int k = 0; k < nq; ++k) {
        const double w = obj_w[static_cast<std::size_t>(k)];
        q_up(k, j) = -w / static_cast<double>(B);
        obj += w * q(k, j);
      }
    }
    obj /= static_cast<double>(B);
    Eigen::MatrixXd in_grad;
    critic.backward(qtape, q_up, &in_grad);
    const Eigen::MatrixXd a_up = in_grad.row(obs_size);
    actor_opt.step(actor, actor.backward(atape, a_up));

    actor_target.soft_update_from(actor, config.soft_update_coeff);
    critic_target_net.soft_update_from(critic, config.soft_update_coeff);
    ++result.gradient_steps;
    window_loss += loss;
    window_obj += obj;
    ++window_n;
  };

  long episodes_done = 0;
  std::vector<EpisodeLog> logs(static_cast<std::size_t>(n_workers));
  while (episodes_done < config.episodes) {
    const int round = static_cast<int>(std::min<long>(n_workers, config.episodes - episodes_done));
    run_parallel(threads, round, [&](int w) {
      const long ep = episodes_done + w;
      const double frac = std::min(1.0, static_cast<double>(ep) / static_cast<double>(noise_horizon));
      const double sigma =
          config.noise_std_start + frac * (config.noise_std_end - config.noise_std_start);
      RngStream noise(config.seed, mix64(static_cast<std::uint64_t>(ep) ^ kNoiseTag));
      Environment& env = *envs[static_cast<std::size_t>(w)];
      EpisodeLog& log = logs[static_cast<std::size_t>(w)];
      log = EpisodeLog{};
      Observation obs = env.reset(episode_seed(config.seed, static_cast<std::uint64_t>(ep), false));
      for (;;) {
        const double a = clamp01(actor.forward(obs.features)[0] + sigma * noise.normal());
        const StepResult r = env.step(a);
        log.obs.push_back(obs.features);
        log.actions.push_back(a);
        log.rewards.push_back(r.reward);
        obs = r.next_obs;
        if (r.done) break;
      }
      log.obs.push_back(obs.features);
    });

    for (int w = 0; w < round; ++w) {
      auto exps = n_step_experiences(logs[static_cast<std::size_t>(w)], config.n_step,
                                     config.discount);
      result.transitions += static_cast<long>(exps.size());
      if (static_cast<long>(buffer.size() + exps.size()) >= warmup) {
        update_credit += config.updates_per_step * static_cast<double>(exps.size());
      }
      for (auto& e : exps) buffer.push(std::move(e));
    }
    if (static_cast<long>(buffer.size()) >= warmup) {
      while (update_credit >= 1.0) {
        gradient_step();
        update_credit -= 1.0;
      }
    }
    episodes_done += round;

    if (episodes_done >= next_curve || episodes_done == config.episodes) {
      CurveRow row;
      row.step = result.gradient_steps;
      row.critic_loss = window_n > 0 ? window_loss / static_cast<double>(window_n)
                                     : std::numeric_limits<double>::quiet_NaN();
      row.actor_objective = window_n > 0 ? window_obj / static_cast<double>(window_n)
                                         : std::numeric_limits<double>::quiet_NaN();
      row.eval_var95 = std::numeric_limits<double>::quiet_NaN();
      if (config.curve_eval_episodes > 0) {
        const auto pnl = evaluate(actor_policy(actor), factory, config.curve_eval_episodes,
                                  config.seed, threads);
        row.eval_var95 = risk::var_q(pnl, 95.0);
      }
      result.curve.push_back(row);
      window_loss = window_obj = 0.0;
      window_n = 0;
      while (next_curve <= episodes_done) next_curve += config.curve_every;
    }
    if (progress) progress(episodes_done);
  }

  result.policy.actor = std::move(actor);
  result.policy.critic = std::move(critic);
  result.policy.seed = config.seed;
  result.policy.normalization = {config.reward_scale};
  return result;
}

void write_curve_csv(const std::vector<CurveRow>& curve, std::ostream& out) {
  out << "step,critic_loss,actor_objective,eval_var95\n";
  out.precision(10);
  for (const auto& r : curve) {
    out << r.step << ',' << r.critic_loss << ',' << r.actor_objective << ',' << r.eval_var95
        << '\n';
  }
}

}  // namespace autohedge::drl
