#include "autohedge/lsmc.hpp"

#include <algorithm>
#include <cmath>

namespace autohedge {

namespace {

double intrinsic(OptionKind kind, double spot, double strike) {
  return is_call(kind) ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
}

double polynomial(const std::vector<double>& c, double m) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * m + *it;
  return acc;
}

// No-arbitrage floor on the value of holding on: the European forward bound.
double holding_floor(OptionKind kind, double m, double rate, double tau) {
  const double df = std::exp(-rate * std::max(tau, 0.0));
  return is_call(kind) ? m - df : df - m;
}

int maturity_step(const TimeGrid& grid, double maturity) {
  const double steps = (maturity - grid.t0) / grid.dt;
  const int M = static_cast<int>(std::lround(steps));
  if (M < 1 || std::abs(steps - M) > 1e-6 || M > grid.n_steps) {
    throw std::invalid_argument("lsmc: maturity must fall on a grid step covered by the paths");
  }
  return M;
}

}  // namespace

std::size_t ContinuationModel::date_index(double t) const {
  const auto it = std::upper_bound(exercise_times.begin(), exercise_times.end(), t + 1e-9);
  if (it == exercise_times.begin()) return 0;
  return static_cast<std::size_t>(it - exercise_times.begin() - 1);
}

double ContinuationModel::continuation(double spot, double t, double strike) const {
  const double m = spot / strike;
  const double fitted = polynomial(coefficients.at(date_index(t)), m);
  return strike * std::max(fitted, holding_floor(kind, m, rate, maturity - t));
}

ContinuationModel lsmc_fit(const PathSet& paths, OptionKind kind, std::span<const double> strikes,
                           double maturity, double rate, const PricerConfig& config) {
  config.validate();
  if (strikes.empty()) throw std::invalid_argument("lsmc_fit needs at least one strike");
  if (paths.n_paths() < config.lsmc_training_paths) {
    throw std::invalid_argument("lsmc_fit: fewer paths than pricer.lsmc_training_paths");
  }
  const TimeGrid& grid = paths.grid;
  const int M = maturity_step(grid, maturity);
  const long P = paths.n_paths();
  const std::size_t S = strikes.size();
  const long n = P * static_cast<long>(S);

  ContinuationModel model;
  model.kind = kind;
  model.maturity = maturity - grid.t0;
  model.rate = rate;
  model.degree = config.lsmc_basis_degree;
  model.exercise_times.resize(M);
  model.coefficients.resize(M);

  // Strike-normalized cash flow of each (path, strike) sample and its step.
  std::vector<double> cash(n);
  std::vector<int> cash_step(n, M);
  for (long p = 0; p < P; ++p) {
    for (std::size_t s = 0; s < S; ++s) {
      cash[p * S + s] = intrinsic(kind, paths.spots(p, M), strikes[s]) / strikes[s];
    }
  }

  std::vector<long> itm;
  itm.reserve(n);
  for (int k = M - 1; k >= 0; --k) {
    model.exercise_times[k] = k * grid.dt;
    itm.clear();
    for (long p = 0; p < P; ++p) {
      for (std::size_t s = 0; s < S; ++s) {
        if (intrinsic(kind, paths.spots(p, k), strikes[s]) > 0.0) itm.push_back(p * S + s);
      }
    }
    const bool any_itm = !itm.empty();
    const long rows = any_itm ? static_cast<long>(itm.size()) : n;
    auto sample = [&](long r) { return any_itm ? itm[r] : r; };

    Eigen::VectorXd y(rows);
    Eigen::VectorXd m(rows);
    for (long r = 0; r < rows; ++r) {
      const long i = sample(r);
      y(r) = cash[i] * std::exp(-rate * (cash_step[i] - k) * grid.dt);
      m(r) = paths.spots(i / S, k) / strikes[i % S];
    }

    std::vector<double> coef(model.degree + 1, 0.0);
    for (int d = model.degree; d >= 0; --d) {
      Eigen::MatrixXd X(rows, d + 1);
      X.col(0).setOnes();
      for (int j = 1; j <= d; ++j) X.col(j) = X.col(j - 1).cwiseProduct(m);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
      if (qr.rank() == d + 1) {
        const Eigen::VectorXd beta = qr.solve(y);
        for (int j = 0; j <= d; ++j) coef[j] = beta(j);
        break;
      }
      model.reduced_degree = true;
    }
    model.coefficients[k] = coef;

    if (!any_itm) continue;
    for (long r = 0; r < rows; ++r) {
      const long i = itm[r];
      const double exercise = intrinsic(kind, paths.spots(i / S, k), strikes[i % S]) / strikes[i % S];
      const double hold = std::max(polynomial(coef, m(r)), holding_floor(kind, m(r), rate, (M - k) * grid.dt));
      if (exercise > hold + 1e-12) {
        cash[i] = exercise;
        cash_step[i] = k;
      }
    }
  }
  return model;
}

bool lsmc_exercise_decision(const ContinuationModel& model, double spot, double t,
                            OptionKind kind, double strike) {
  if (t >= model.maturity - 1e-12) return false;
  const double value = intrinsic(kind, spot, strike);
  if (value <= 0.0) return false;
  return value > model.continuation(spot, t, strike) + 1e-12 * strike;
}

LsmcPrice lsmc_price(const ContinuationModel& model, const PathSet& paths, double strike) {
  const TimeGrid& grid = paths.grid;
  const int M = maturity_step(grid, grid.t0 + model.maturity);
  const long P = paths.n_paths();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long p = 0; p < P; ++p) {
    double pv = std::exp(-model.rate * M * grid.dt) * intrinsic(model.kind, paths.spots(p, M), strike);
    for (int k = 0; k < M; ++k) {
      const double t = k * grid.dt;
      if (lsmc_exercise_decision(model, paths.spots(p, k), t, model.kind, strike)) {
        pv = std::exp(-model.rate * t) * intrinsic(model.kind, paths.spots(p, k), strike);
        break;
      }
    }
    sum += pv;
    sum_sq += pv * pv;
  }
  const double mean = sum / P;
  const double var = P > 1 ? std::max(0.0, (sum_sq - P * mean * mean) / (P - 1)) : 0.0;
  return {mean, std::sqrt(var / P)};
}

}  // namespace autohedge
