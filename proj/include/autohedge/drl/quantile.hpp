#pragma once

#include <span>
#include <string>
#include <vector>

namespace autohedge::drl {

/// Fixed-level quantile representation of a return distribution.
struct QuantileDistribution {
  std::vector<double> atoms;  // atom k estimates the level (2k-1)/(2N) quantile

  static std::vector<double> levels(std::size_t n);
};

struct QuantileLoss {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d atom
};

/// Quantile-Huber loss averaged over all (atom, target) pairs:
///   |tau_k - 1{u < 0}| * Huber_k(u) / k,  u = target - atom_k.
QuantileLoss quantile_huber_loss(std::span<const double> atoms, std::span<const double> targets,
                                 double huber_k = 1.0);

/// r + discount * atom_k for each atom, or {r} for a terminal transition.
std::vector<double> critic_target(double reward, bool done, double discount,
                                  std::span<const double> next_atoms);

enum class Objective { expected, var95, mix_5_95 };

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

/// 0-based index of the atom standing for level p: ceil(p * N) - 1.
std::size_t atom_index_at_level(double p, std::size_t n);

/// Linear weights w with objective = sum_k w_k atom_k.
std::vector<double> objective_weights(Objective objective, std::size_t n);

/// Scalar the actor maximizes: the mean of the atoms, the atom at level 0.05
/// (bad PnL tail), or the even mix of the atoms at levels 0.05 and 0.95.
double actor_objective(std::span<const double> atoms, Objective objective);

}  // namespace autohedge::drl
