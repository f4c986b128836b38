#include "autohedge/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace autohedge::risk {

namespace {

void check(std::span<const double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("risk estimator needs samples");
  if (!(q > 0.0 && q < 100.0)) throw std::invalid_argument("VaR level must be in (0, 100)");
}

std::size_t order_index(std::size_t n, double q) {
  const double pos = std::ceil((1.0 - q / 100.0) * static_cast<double>(n) - 1e-9);
  const auto k = static_cast<std::size_t>(std::max(1.0, pos));
  return std::min(k, n) - 1;
}

}  // namespace

double var_q(std::span<const double> samples, double q) {
  check(samples, q);
  std::vector<double> v(samples.begin(), samples.end());
  const std::size_t k = order_index(v.size(), q);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

double cvar_q(std::span<const double> samples, double q) {
  const double var = var_q(samples, q);
  double sum = 0.0;
  long n = 0;
  for (double x : samples) {
    if (x <= var) {
      sum += x;
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : var;
}

std::optional<double> skewness(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 3) return std::nullopt;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0.0)) return std::nullopt;
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double mean_minus(double mean, double std) { return mean - 1.645 * std; }

RiskReport report(std::span<const double> samples, double gamma_ratio,
                  const std::string& strategy) {
  if (samples.empty()) throw std::invalid_argument("report needs samples");
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("report got a non-finite sample");
  }
  RiskReport r;
  r.strategy = strategy;
  r.n = static_cast<long>(samples.size());
  const auto n = static_cast<double>(samples.size());
  r.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - r.mean) * (x - r.mean);
  r.std = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  r.mean_minus_1p645_std = mean_minus(r.mean, r.std);
  r.var5 = var_q(samples, 5.0);
  r.cvar5 = cvar_q(samples, 5.0);
  r.var95 = var_q(samples, 95.0);
  r.cvar95 = cvar_q(samples, 95.0);
  r.gamma_ratio = gamma_ratio;
  r.skewness = skewness(samples);
  return r;
}

Histogram histogram(std::span<const double> samples, int n_bins) {
  if (n_bins < 1) throw std::invalid_argument("histogram needs n_bins >= 1");
  if (samples.empty()) throw std::invalid_argument("histogram needs samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = (hi - lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.edges.push_back(i == n_bins ? hi : lo + i * width);
  for (double x : samples) {
    long b = width > 0.0 ? static_cast<long>((x - lo) / width) : 0;
    b = std::clamp(b, 0L, static_cast<long>(n_bins) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

std::string report_json(const std::vector<RiskReport>& rows, const SeedSet& seeds,
                        const std::string& config_fingerprint) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["strategy"] = r.strategy;
    j["mean"] = r.mean;
    j["std"] = r.std;
    j["mean_minus_1p645_std"] = r.mean_minus_1p645_std;
    j["var5"] = r.var5;
    j["cvar5"] = r.cvar5;
    j["var95"] = r.var95;
    j["cvar95"] = r.cvar95;
    j["gamma_ratio"] = r.gamma_ratio;
    if (r.skewness) {
      j["skewness"] = *r.skewness;
    } else {
      j["skewness"] = nullptr;
    }
    j["n"] = r.n;
    j["seed_set"] = {{"base", seeds.base}, {"episodes", seeds.episodes}};
    j["config_fingerprint"] = config_fingerprint;
    out.push_back(std::move(j));
  }
  return out.dump(2);
}

void write_report_csv(const std::vector<RiskReport>& rows, std::ostream& out) {
  out << "strategy,mean,std,mean_minus_1p645_std,var5,cvar5,var95,cvar95,gamma_ratio,skewness,n\n";
  const auto prec = out.precision(10);
  for (const auto& r : rows) {
    out << r.strategy << ',' << r.mean << ',' << r.std << ',' << r.mean_minus_1p645_std << ','
        << r.var5 << ',' << r.cvar5 << ',' << r.var95 << ',' << r.cvar95 << ',' << r.gamma_ratio
        << ',';
    if (r.skewness) out << *r.skewness;
    out << ',' << r.n << '\n';
  }
  out.precision(prec);
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
  out << "bin_left,bin_right,count\n";
  const auto prec = out.precision(12);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.counts[i] << '\n';
  }
  out.precision(prec);
}

}  // namespace autohedge::risk
