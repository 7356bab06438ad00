#pragma once

// Utility, demand, global metric and equity kernels. Pure functions with no
// state; all arithmetic in double precision.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "equibench/registry.hpp"

namespace equibench::metrics {

/// Per-language demand distribution for one exponent. Weights sum to 1.
struct DemandWeights {
  double tau = 0.0;
  std::map<std::string, double> weights;
};

struct GlobalMetric {
  double tau = 0.0;
  double value = 0.0;
};

struct EquityReport {
  double gini = 0.0;
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// performance / theoretical_max. Throws Error{domain} when the max is not
/// positive or the performance falls outside [0, max].
double utility(double performance, double theoretical_max);

/// n_l^tau / sum(n^tau). 0^0 is 1, so tau = 0 is uniform even over
/// zero-population rows. Throws Error{domain} for an empty map, negative
/// tau, or tau > 0 with every population zero.
DemandWeights demand_weights(const std::map<std::string, std::uint64_t>& populations,
                             double tau);

/// Index-aligned variant of demand_weights used on hot paths.
std::vector<double> demand_vector(std::span<const std::uint64_t> populations, double tau);

/// sum_l weight_l * u_l, renormalized by sum_l weight_l so that all-ones is
/// exactly 1. Throws Error{domain} when key sets differ.
GlobalMetric global_metric(const std::map<std::string, double>& utilities,
                           const DemandWeights& weights);

/// Index-aligned global metric: compensated sum of weight * utility over the
/// summed weights, clamped to [0, 1].
double weighted_sum(std::span<const double> weights, std::span<const double> utilities);

/// Gini coefficient over values sorted non-decreasingly. Throws
/// Error{domain} for empty or negative input and Error{degenerate} when
/// every value is zero.
EquityReport gini(std::span<const double> values);

/// gini() except that an all-zero vector reports the supremum (n-1)/n.
double gini_or_supremum(std::span<const double> values);

/// d_l^(tau) * (1 - u_l): large for populous, poorly served languages.
std::map<std::string, double> underserved_scores(
    const std::map<std::string, double>& utilities,
    const std::map<std::string, std::uint64_t>& populations, double tau);

/// Percentage of the registry's population whose language is in `covered`.
/// Throws Error{domain} for codes the registry does not know.
double population_coverage(const std::set<std::string>& covered,
                           const LanguageRegistry& registry);

}  // namespace equibench::metrics
