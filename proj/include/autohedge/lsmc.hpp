#pragma once

#include <span>
#include <vector>

#include "autohedge/market.hpp"
#include "autohedge/pricing.hpp"

namespace autohedge {

/// Longstaff-Schwartz continuation values for one option kind, indexed by time
/// elapsed since issue. Regressions are pooled across strikes in moneyness
/// m = spot / strike with strike-normalized targets; one polynomial in m per
/// exercise date.
struct ContinuationModel {
  OptionKind kind = OptionKind::american_put;
  double maturity = 0.0;  // option life in years
  double rate = 0.0;
  int degree = 3;
  std::vector<double> exercise_times;             // elapsed time, increasing, first is 0
  std::vector<std::vector<double>> coefficients;  // one row per exercise date
  bool reduced_degree = false;  // some date fell back to a lower degree

  /// Index of the latest exercise date not after `t`; clamps to the first.
  std::size_t date_index(double t) const;
  /// Fitted value of holding on, floored at the European forward bound.
  double continuation(double spot, double t, double strike) const;
};

/// Backward induction over every grid step before `maturity`; `paths` must
/// start at issue and cover maturity on a grid step.
ContinuationModel lsmc_fit(const PathSet& paths, OptionKind kind, std::span<const double> strikes,
                           double maturity, double rate, const PricerConfig& config);

/// Exercise iff intrinsic value strictly exceeds the predicted continuation.
/// Times at or past maturity never exercise.
bool lsmc_exercise_decision(const ContinuationModel& model, double spot, double t,
                            OptionKind kind, double strike);

struct LsmcPrice {
  double price;
  double std_error;
};

/// Applies the fitted rule along independent paths.
LsmcPrice lsmc_price(const ContinuationModel& model, const PathSet& paths, double strike);

}  // namespace autohedge
