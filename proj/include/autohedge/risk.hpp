#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace autohedge::risk {

/// q%VaR: the lower order statistic at 1-based index ceil((1 - q/100) * n),
/// so var_q(x, 95) sits in the bad tail of the PnL and var_q(x, 5) in the good one.
double var_q(std::span<const double> samples, double q);
/// Mean of every sample <= var_q(samples, q).
double cvar_q(std::span<const double> samples, double q);

/// Bias-corrected sample skewness; empty when n < 3 or the variance is zero.
std::optional<double> skewness(std::span<const double> samples);

/// mean - 1.645 * std
double mean_minus(double mean, double std);

struct RiskReport {
  std::string strategy;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator
  double mean_minus_1p645_std = 0.0;
  double var5 = 0.0;
  double cvar5 = 0.0;
  double var95 = 0.0;
  double cvar95 = 0.0;
  double gamma_ratio = 0.0;
  std::optional<double> skewness;
  long n = 0;
};

RiskReport report(std::span<const double> samples, double gamma_ratio,
                  const std::string& strategy = "");

struct Histogram {
  std::vector<double> edges;  // n_bins + 1
  std::vector<long> counts;
};

/// Equal-width bins over [min, max]; the last bin is closed.
Histogram histogram(std::span<const double> samples, int n_bins);

/// Seeds identify the evaluation episodes that produced the samples.
struct SeedSet {
  std::uint64_t base = 0;
  long episodes = 0;
};

std::string report_json(const std::vector<RiskReport>& rows, const SeedSet& seeds,
                        const std::string& config_fingerprint);
void write_report_csv(const std::vector<RiskReport>& rows, std::ostream& out);
void write_histogram_csv(const Histogram& h, std::ostream& out);

}  // namespace autohedge::risk
