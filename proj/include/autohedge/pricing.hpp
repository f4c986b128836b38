#pragma once

#include <functional>

#include "autohedge/instruments.hpp"
#include "autohedge/market.hpp"

namespace autohedge {

struct Valuation {
  double price = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double std_error = 0.0;  // 0 for closed forms
};

struct PricerConfig {
  long n_mc_paths = 2000;
  double fd_bump_rel = 0.005;
  int binomial_steps = 2000;
  int lsmc_basis_degree = 3;
  long lsmc_training_paths = 10000;
  double rate = 0.0;
  // Note valuation cache on a (log spot x log vol) grid per monthly date.
  bool valuation_cache = false;
  double cache_log_spot_step = 0.02;
  double cache_log_vol_step = 0.25;
  // Tree size used for American options inside the environment.
  int env_tree_steps = 200;

  void validate() const;
};

double norm_cdf(double x);
double norm_pdf(double x);

/// Black-Scholes call/put (the exercise style of `kind` is ignored). At zero
/// vol or zero time the discounted intrinsic value is returned with
/// right-sided Greeks.
Valuation bs_european(OptionKind kind, double spot, double strike, double vol, double rate,
                      double time_to_maturity);

/// Cash-or-nothing digital; `kind` selects call or put.
Valuation bs_digital(OptionKind kind, double spot, double strike, double vol, double rate,
                     double time_to_maturity, double cash_amount);

/// CRR tree with exercise at every node.
double binomial_american(OptionKind kind, double spot, double strike, double vol, double rate,
                         double time_to_maturity, int steps);

/// American value with delta/gamma read off the tree. Uses the closed form
/// when early exercise has no value (calls with rate >= 0, puts with rate 0).
Valuation american_valuation(OptionKind kind, double spot, double strike, double vol,
                             double rate, double time_to_maturity, int steps);

/// Value of one unit of `option` at time `t`. Expired options return the
/// payoff with zero Greeks.
Valuation option_valuation(const OptionSpec& option, double spot, double vol, double rate,
                           double t, int tree_steps);

using SpotPricer = std::function<double(double spot, RngStream& rng)>;

struct Greeks {
  double delta;
  double gamma;
};

/// Central differences with h = bump_rel * spot; every evaluation receives a
/// fresh copy of `rng`, so stochastic pricers see common random numbers.
Greeks fd_greeks(const SpotPricer& pricer, double spot, double bump_rel, const RngStream& rng);

/// Nested Monte Carlo value of the live note seen from (spot, vol_state,
/// t_now). Inner paths step to each remaining monthly observation date under
/// drift `config.rate`. Flows at t_now itself are treated as settled. The
/// three bumped spots share every draw. Zero volatility is evaluated exactly.
Valuation price_autocallable_mc(const AutocallableSpec& spec, double spot, double vol_state,
                                double t_now, const SabrParams& params,
                                const PricerConfig& config, const RngStream& rng);

}  // namespace autohedge
