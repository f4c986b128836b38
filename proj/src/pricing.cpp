#include "autohedge/pricing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace autohedge {

void PricerConfig::validate() const {
  if (n_mc_paths < 1) throw std::invalid_argument("pricer.n_mc_paths must be >= 1");
  if (!(fd_bump_rel > 0.0 && fd_bump_rel < 0.1)) {
    throw std::invalid_argument("pricer.fd_bump_rel must be in (0, 0.1)");
  }
  if (binomial_steps < 1) throw std::invalid_argument("pricer.binomial_steps must be >= 1");
  if (lsmc_basis_degree < 0) throw std::invalid_argument("pricer.lsmc_basis_degree must be >= 0");
  if (lsmc_training_paths < 1) throw std::invalid_argument("pricer.lsmc_training_paths must be >= 1");
  if (!std::isfinite(rate)) throw std::invalid_argument("pricer.rate must be finite");
  if (!(cache_log_spot_step > 0.0)) throw std::invalid_argument("pricer.cache_log_spot_step must be > 0");
  if (!(cache_log_vol_step > 0.0)) throw std::invalid_argument("pricer.cache_log_vol_step must be > 0");
  if (env_tree_steps < 2) throw std::invalid_argument("pricer.env_tree_steps must be >= 2");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

Valuation bs_european(OptionKind kind, double spot, double strike, double vol, double rate,
                      double time_to_maturity) {
  const bool call = is_call(kind);
  const double T = std::max(time_to_maturity, 0.0);
  const double df = std::exp(-rate * T);
  Valuation v;
  if (T <= 0.0 || vol <= 0.0) {
    const double k_disc = strike * df;
    if (call) {
      v.price = std::max(spot - k_disc, 0.0);
      v.delta = spot >= k_disc ? 1.0 : 0.0;
    } else {
      v.price = std::max(k_disc - spot, 0.0);
      v.delta = spot < k_disc ? -1.0 : 0.0;
    }
    return v;
  }
  const double sd = vol * std::sqrt(T);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * T) / sd;
  const double d2 = d1 - sd;
  if (call) {
    v.price = spot * norm_cdf(d1) - strike * df * norm_cdf(d2);
    v.delta = norm_cdf(d1);
  } else {
    v.price = strike * df * norm_cdf(-d2) - spot * norm_cdf(-d1);
    v.delta = norm_cdf(d1) - 1.0;
  }
  v.gamma = norm_pdf(d1) / (spot * sd);
  return v;
}

Valuation bs_digital(OptionKind kind, double spot, double strike, double vol, double rate,
                     double time_to_maturity, double cash_amount) {
  const bool call = is_call(kind);
  const double T = std::max(time_to_maturity, 0.0);
  const double pv = cash_amount * std::exp(-rate * T);
  Valuation v;
  if (T <= 0.0 || vol <= 0.0) {
    const bool above = spot * std::exp(rate * T) >= strike;
    v.price = (call == above) ? pv : 0.0;
    return v;
  }
  const double sd = vol * std::sqrt(T);
  const double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * T) / sd;
  const double d2 = d1 - sd;
  const double sign = call ? 1.0 : -1.0;
  v.price = pv * norm_cdf(sign * d2);
  v.delta = sign * pv * norm_pdf(d2) / (spot * sd);
  v.gamma = -sign * pv * norm_pdf(d2) * d1 / (spot * spot * sd * sd);
  return v;
}

namespace {

double intrinsic(bool call, double spot, double strike) {
  return call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
}

// Zero-vol American: best discounted exercise along the deterministic forward.
Valuation deterministic_american(bool call, double spot, double strike, double rate, double T,
                                 int steps) {
  auto value_at = [&](double s0) {
    double best = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double t = T * i / steps;
      best = std::max(best, std::exp(-rate * t) * intrinsic(call, s0 * std::exp(rate * t), strike));
    }
    return best;
  };
  Valuation v;
  v.price = value_at(spot);
  const double h = 1e-6 * spot;
  v.delta = (value_at(spot + h) - v.price) / h;
  return v;
}

struct TreeResult {
  double price;
  double delta;
  double gamma;
};

TreeResult crr_tree(bool call, double spot, double strike, double vol, double rate, double T,
                    int steps) {
  const double dt = T / steps;
  const double u = std::exp(vol * std::sqrt(dt));
  const double d = 1.0 / u;
  const double growth = std::exp(rate * dt);
  const double p = (growth - d) / (u - d);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binomial tree: risk-neutral probability outside [0, 1]");
  }
  const double disc = 1.0 / growth;
  std::vector<double> values(steps + 1);
  // node j at level i has spot * u^(i - 2j)
  for (int j = 0; j <= steps; ++j) {
    values[j] = intrinsic(call, spot * std::pow(u, steps - 2 * j), strike);
  }
  std::array<double, 3> level2{};
  std::array<double, 2> level1{};
  for (int i = steps - 1; i >= 0; --i) {
    double s = spot * std::pow(u, i);
    const double step_down = d * d;
    for (int j = 0; j <= i; ++j) {
      const double cont = disc * (p * values[j] + (1.0 - p) * values[j + 1]);
      values[j] = std::max(cont, intrinsic(call, s, strike));
      s *= step_down;
    }
    if (i == 2) std::copy_n(values.begin(), 3, level2.begin());
    if (i == 1) std::copy_n(values.begin(), 2, level1.begin());
  }
  TreeResult r{values[0], 0.0, 0.0};
  if (steps >= 2) {
    r.delta = (level1[0] - level1[1]) / (spot * (u - d));
    const double up = (level2[0] - level2[1]) / (spot * (u * u - 1.0));
    const double down = (level2[1] - level2[2]) / (spot * (1.0 - d * d));
    r.gamma = (up - down) / (0.5 * spot * (u * u - d * d));
  }
  return r;
}

}  // namespace

double binomial_american(OptionKind kind, double spot, double strike, double vol, double rate,
                         double time_to_maturity, int steps) {
  if (steps < 1) throw std::invalid_argument("binomial_american needs steps >= 1");
  const bool call = is_call(kind);
  if (time_to_maturity <= 0.0) return intrinsic(call, spot, strike);
  if (vol <= 0.0) {
    return deterministic_american(call, spot, strike, rate, time_to_maturity, steps).price;
  }
  return crr_tree(call, spot, strike, vol, rate, time_to_maturity, steps).price;
}

Valuation american_valuation(OptionKind kind, double spot, double strike, double vol,
                             double rate, double time_to_maturity, int steps) {
  const bool call = is_call(kind);
  if ((call && rate >= 0.0) || (!call && rate == 0.0)) {
    return bs_european(kind, spot, strike, vol, rate, time_to_maturity);
  }
  if (time_to_maturity <= 0.0) return {intrinsic(call, spot, strike), 0.0, 0.0, 0.0};
  if (vol <= 0.0) return deterministic_american(call, spot, strike, rate, time_to_maturity, steps);
  const auto r = crr_tree(call, spot, strike, vol, rate, time_to_maturity, std::max(steps, 2));
  return {r.price, r.delta, r.gamma, 0.0};
}

Valuation option_valuation(const OptionSpec& option, double spot, double vol, double rate,
                           double t, int tree_steps) {
  const double ttm = option.maturity - t;
  if (ttm <= 1e-12) return {vanilla_payoff(option, spot), 0.0, 0.0, 0.0};
  if (is_digital(option.kind)) {
    return bs_digital(option.kind, spot, option.strike, vol, rate, ttm, option.cash_amount);
  }
  if (is_american(option.kind)) {
    return american_valuation(option.kind, spot, option.strike, vol, rate, ttm, tree_steps);
  }
  return bs_european(option.kind, spot, option.strike, vol, rate, ttm);
}

Greeks fd_greeks(const SpotPricer& pricer, double spot, double bump_rel, const RngStream& rng) {
  const double h = bump_rel * spot;
  if (!(h > 0.0) || spot + h == spot || spot - h == spot || !(spot - h > 0.0)) {
    throw std::domain_error("fd_greeks: bump size underflows at spot " + std::to_string(spot));
  }
  RngStream r_down = rng;
  RngStream r_mid = rng;
  RngStream r_up = rng;
  const double v_down = pricer(spot - h, r_down);
  const double v_mid = pricer(spot, r_mid);
  const double v_up = pricer(spot + h, r_up);
  return {(v_up - v_down) / (2.0 * h), (v_up - 2.0 * v_mid + v_down) / (h * h)};
}

Valuation price_autocallable_mc(const AutocallableSpec& spec, double spot, double vol_state,
                                double t_now, const SabrParams& params,
                                const PricerConfig& config, const RngStream& rng) {
  const NoteObserver observer(spec);
  const int maturity = observer.maturity_month();
  const int first = static_cast<int>(std::floor(t_now * 12.0 + 1e-9)) + 1;
  if (first > maturity) throw ContractError("price_autocallable_mc: note has matured");

  const double h = config.fd_bump_rel * spot;
  if (!(h > 0.0) || spot + h == spot || !(spot - h > 0.0)) {
    throw std::domain_error("price_autocallable_mc: bump size underflows");
  }
  const std::array<double, 3> start{spot - h, spot, spot + h};
  const double r = config.rate;

  // Per-month step lengths and discount factors.
  const int n_months = maturity - first + 1;
  std::vector<double> step_dt(n_months), step_sqdt(n_months), discount(n_months);
  {
    double t = t_now;
    for (int k = 0; k < n_months; ++k) {
      const double tm = (first + k) / 12.0;
      step_dt[k] = tm - t;
      step_sqdt[k] = std::sqrt(step_dt[k]);
      discount[k] = std::exp(-r * (tm - t_now));
      t = tm;
    }
  }

  std::array<double, 3> mean{};
  Valuation v;
  if (vol_state <= 0.0) {
    for (int leg = 0; leg < 3; ++leg) {
      double acc = 0.0;
      for (int k = 0; k < n_months; ++k) {
        const double s = start[leg] * std::exp(r * ((first + k) / 12.0 - t_now));
        const auto out = observer.observe(first + k, s);
        acc += discount[k] * out.amount;
        if (out.terminated) break;
      }
      mean[leg] = acc;
    }
  } else {
    RngStream draws = rng;
    const double beta = params.beta;
    const double nu = params.nu;
    const double rho = params.rho;
    const double rho_c = std::sqrt(1.0 - rho * rho);
    const long n = config.n_mc_paths;
    std::array<double, 3> sum{};
    double sum_sq = 0.0;
    for (long p = 0; p < n; ++p) {
      std::array<double, 3> s = start;
      std::array<bool, 3> alive{true, true, true};
      std::array<double, 3> acc{};
      double vol = vol_state;
      int n_alive = 3;
      for (int k = 0; k < n_months && n_alive > 0; ++k) {
        const double z1 = draws.normal();
        const double z2 = rho * z1 + rho_c * draws.normal();
        const double dt = step_dt[k];
        for (int leg = 0; leg < 3; ++leg) {
          if (!alive[leg]) continue;
          const double lv = beta == 1.0 ? vol : vol * std::pow(s[leg], beta - 1.0);
          s[leg] *= std::exp((r - 0.5 * lv * lv) * dt + lv * step_sqdt[k] * z1);
          if (!(std::isfinite(s[leg]) && s[leg] > 0.0)) {
            throw SimulationError("non-finite spot in note pricer", p, first + k);
          }
          const auto out = observer.observe(first + k, s[leg]);
          acc[leg] += discount[k] * out.amount;
          if (out.terminated) {
            alive[leg] = false;
            --n_alive;
          }
        }
        vol *= std::exp(-0.5 * nu * nu * dt + nu * step_sqdt[k] * z2);
      }
      for (int leg = 0; leg < 3; ++leg) sum[leg] += acc[leg];
      sum_sq += acc[1] * acc[1];
    }
    for (int leg = 0; leg < 3; ++leg) mean[leg] = sum[leg] / static_cast<double>(n);
    if (n > 1) {
      const double var = std::max(0.0, (sum_sq - n * mean[1] * mean[1]) / (n - 1));
      v.std_error = std::sqrt(var / static_cast<double>(n));
    }
  }
  v.price = mean[1];
  v.delta = (mean[2] - mean[0]) / (2.0 * h);
  v.gamma = (mean[2] - 2.0 * mean[1] + mean[0]) / (h * h);
  return v;
}

}  // namespace autohedge
