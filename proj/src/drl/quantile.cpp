#include "autohedge/drl/quantile.hpp"

#include <cmath>
#include <stdexcept>

namespace autohedge::drl {

std::vector<double> QuantileDistribution::levels(std::size_t n) {
  std::vector<double> tau(n);
  for (std::size_t k = 0; k < n; ++k) tau[k] = (2.0 * k + 1.0) / (2.0 * n);
  return tau;
}

QuantileLoss quantile_huber_loss(std::span<const double> atoms, std::span<const double> targets,
                                 double huber_k) {
  if (atoms.empty() || targets.empty()) {
    throw std::invalid_argument("quantile_huber_loss needs atoms and targets");
  }
  if (!(huber_k > 0.0)) throw std::invalid_argument("quantile_huber_loss needs huber_k > 0");
  const std::size_t n = atoms.size();
  const std::size_t m = targets.size();
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(m) * huber_k);
  QuantileLoss out;
  out.grad.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = (2.0 * k + 1.0) / (2.0 * n);
    double loss = 0.0;
    double grad = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double u = targets[j] - atoms[k];
      const double w = u < 0.0 ? 1.0 - tau : tau;
      const double au = std::abs(u);
      if (au <= huber_k) {
        loss += w * 0.5 * u * u;
        grad -= w * u;
      } else {
        loss += w * huber_k * (au - 0.5 * huber_k);
        grad -= w * huber_k * (u > 0.0 ? 1.0 : -1.0);
      }
    }
    out.loss += loss * scale;
    out.grad[k] = grad * scale;
  }
  return out;
}

std::vector<double> critic_target(double reward, bool done, double discount,
                                  std::span<const double> next_atoms) {
  if (done) return {reward};
  std::vector<double> t(next_atoms.size());
  for (std::size_t k = 0; k < next_atoms.size(); ++k) t[k] = reward + discount * next_atoms[k];
  return t;
}

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::expected: return "expected";
    case Objective::var95: return "var95";
    case Objective::mix_5_95: return "mix_5_95";
  }
  return "unknown";
}

Objective objective_from_string(const std::string& name) {
  if (name == "expected") return Objective::expected;
  if (name == "var95") return Objective::var95;
  if (name == "mix_5_95") return Objective::mix_5_95;
  throw std::invalid_argument("unknown objective '" + name + "'");
}

std::size_t atom_index_at_level(double p, std::size_t n) {
  const double pos = std::ceil(p * static_cast<double>(n) - 1e-9);
  const auto idx = static_cast<long>(pos) - 1;
  if (idx < 0) return 0;
  return std::min(static_cast<std::size_t>(idx), n - 1);
}

std::vector<double> objective_weights(Objective objective, std::size_t n) {
  std::vector<double> w(n, 0.0);
  switch (objective) {
    case Objective::expected:
      for (auto& x : w) x = 1.0 / static_cast<double>(n);
      break;
    case Objective::var95:
      w[atom_index_at_level(0.05, n)] = 1.0;
      break;
    case Objective::mix_5_95:
      w[atom_index_at_level(0.05, n)] += 0.5;
      w[atom_index_at_level(0.95, n)] += 0.5;
      break;
  }
  return w;
}

double actor_objective(std::span<const double> atoms, Objective objective) {
  const auto w = objective_weights(objective, atoms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) acc += w[k] * atoms[k];
  return acc;
}

}  // namespace autohedge::drl
