#include "equibench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "equibench/error.hpp"

namespace equibench::metrics {

namespace {

// Neumaier summation; the demand denominator spans ~7k terms of very
// different magnitude.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Dividing by the summed weights (1 up to rounding) makes all-ones exactly
// 1 and keeps the result inside [0, 1].
double normalized(const CompensatedSum& total, const CompensatedSum& mass) {
  const double m = mass.value();
  if (!(m > 0.0)) return 0.0;
  return std::clamp(total.value() / m, 0.0, 1.0);
}

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::domain, "tau must be a finite non-negative number");
  }
}

}  // namespace

double utility(double performance, double theoretical_max) {
  if (!(theoretical_max > 0.0)) {
    throw Error(ErrorKind::domain, "theoretical max performance must be positive");
  }
  if (!(performance >= 0.0) || performance > theoretical_max) {
    throw Error(ErrorKind::domain, "performance must lie in [0, theoretical max]");
  }
  return performance / theoretical_max;
}

std::vector<double> demand_vector(std::span<const std::uint64_t> populations, double tau) {
  if (populations.empty()) throw Error(ErrorKind::domain, "demand over an empty language set");
  check_tau(tau);

  std::vector<double> weights(populations.size());
  if (tau == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(populations.size()));
    return weights;
  }

  // Scaling by the largest population leaves the ratio unchanged and keeps
  // n^tau finite for large tau.
  const double largest = static_cast<double>(*std::max_element(populations.begin(), populations.end()));
  if (largest == 0.0) {
    throw Error(ErrorKind::domain, "tau > 0 needs at least one positive population");
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < populations.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(populations[i]) / largest, tau);
    total.add(weights[i]);
  }
  const double denom = total.value();
  for (double& w : weights) w /= denom;
  return weights;
}

DemandWeights demand_weights(const std::map<std::string, std::uint64_t>& populations,
                             double tau) {
  std::vector<std::uint64_t> pops;
  pops.reserve(populations.size());
  for (const auto& [code, n] : populations) pops.push_back(n);
  const auto weights = demand_vector(pops, tau);

  DemandWeights out;
  out.tau = tau;
  std::size_t i = 0;
  for (const auto& [code, n] : populations) out.weights.emplace_hint(out.weights.end(), code, weights[i++]);
  return out;
}

double weighted_sum(std::span<const double> weights, std::span<const double> utilities) {
  if (weights.size() != utilities.size()) {
    throw Error(ErrorKind::domain, "weights and utilities differ in length");
  }
  CompensatedSum total;
  CompensatedSum mass;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total.add(weights[i] * utilities[i]);
    mass.add(weights[i]);
  }
  return normalized(total, mass);
}

GlobalMetric global_metric(const std::map<std::string, double>& utilities,
                           const DemandWeights& weights) {
  if (utilities.size() != weights.weights.size()) {
    throw Error(ErrorKind::domain, "utilities and weights cover different languages");
  }
  CompensatedSum total;
  CompensatedSum mass;
  auto w = weights.weights.begin();
  for (const auto& [code, u] : utilities) {
    if (w->first != code) {
      throw Error(ErrorKind::domain, "no demand weight for language '" + code + "'");
    }
    total.add(w->second * u);
    mass.add(w->second);
    ++w;
  }
  return {weights.tau, normalized(total, mass)};
}

EquityReport gini(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::domain, "Gini of an empty vector");
  std::vector<double> y(values.begin(), values.end());
  for (double v : y) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::domain, "Gini inputs must be finite and non-negative");
    }
  }
  std::sort(y.begin(), y.end());

  const auto n = y.size();
  const double nd = static_cast<double>(n);
  CompensatedSum total;
  CompensatedSum ranked;  // sum of (n + 1 - i) * y_i with 1-based i
  for (std::size_t i = 0; i < n; ++i) {
    total.add(y[i]);
    ranked.add(static_cast<double>(n - i) * y[i]);
  }
  const double sum = total.value();
  if (sum == 0.0) throw Error(ErrorKind::degenerate, "Gini is undefined for an all-zero vector");

  EquityReport report;
  report.n = n;
  report.min = y.front();
  report.max = y.back();
  report.mean = sum / nd;
  if (y.front() == y.back()) {
    report.gini = 0.0;
  } else {
    const double g = (nd + 1.0 - 2.0 * ranked.value() / sum) / nd;
    report.gini = std::clamp(g, 0.0, (nd - 1.0) / nd);
  }
  return report;
}

double gini_or_supremum(std::span<const double> values) {
  const bool all_zero = !values.empty() &&
                        std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    const double nd = static_cast<double>(values.size());
    return (nd - 1.0) / nd;
  }
  return gini(values).gini;
}

std::map<std::string, double> underserved_scores(
    const std::map<std::string, double>& utilities,
    const std::map<std::string, std::uint64_t>& populations, double tau) {
  if (utilities.size() != populations.size()) {
    throw Error(ErrorKind::domain, "utilities and populations cover different languages");
  }
  const auto demand = demand_weights(populations, tau);
  std::map<std::string, double> scores;
  auto u = utilities.begin();
  for (const auto& [code, weight] : demand.weights) {
    if (u->first != code) {
      throw Error(ErrorKind::domain, "no utility for language '" + code + "'");
    }
    scores.emplace_hint(scores.end(), code, weight * (1.0 - u->second));
    ++u;
  }
  return scores;
}

double population_coverage(const std::set<std::string>& covered,
                           const LanguageRegistry& registry) {
  std::uint64_t sum = 0;
  for (const auto& code : covered) {
    auto idx = registry.index_of(code);
    if (!idx) throw Error(ErrorKind::domain, "covered language '" + code + "' not in registry");
    sum += registry.at(*idx).population;
  }
  const auto total = registry.total_population();
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(sum) / static_cast<double>(total);
}

}  // namespace equibench::metrics
