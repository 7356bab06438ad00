#include "oracles.hpp"

#include <cmath>

namespace equibench::test {

double gini_pairwise(std::span<const double> values) {
  const long double n = static_cast<long double>(values.size());
  long double total = 0.0L;
  long double diff = 0.0L;
  for (double x : values) {
    total += x;
    for (double y : values) diff += std::fabs(static_cast<long double>(x) - y);
  }
  const long double mean = total / n;
  return static_cast<double>(diff / (2.0L * n * n * mean));
}

std::vector<double> demand_direct(std::span<const std::uint64_t> populations, double tau) {
  std::vector<long double> raw;
  long double total = 0.0L;
  for (auto p : populations) {
    const long double w = tau == 0.0 ? 1.0L : std::pow(static_cast<long double>(p), tau);
    raw.push_back(w);
    total += w;
  }
  std::vector<double> out;
  for (auto w : raw) out.push_back(static_cast<double>(w / total));
  return out;
}

double weighted_sum_direct(std::span<const double> weights, std::span<const double> utilities) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += static_cast<long double>(weights[i]) * utilities[i];
  }
  return static_cast<double>(sum);
}

double global_metric_direct(const std::map<std::string, std::uint64_t>& populations,
                            const std::map<std::string, double>& utilities, double tau) {
  long double total = 0.0L;
  long double served = 0.0L;
  for (const auto& [code, p] : populations) {
    const long double w = tau == 0.0 ? 1.0L : std::pow(static_cast<long double>(p), tau);
    total += w;
    if (auto it = utilities.find(code); it != utilities.end()) served += w * it->second;
  }
  return static_cast<double>(served / total);
}

}  // namespace equibench::test
