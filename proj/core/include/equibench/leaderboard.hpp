#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equibench/events.hpp"
#include "equibench/registry.hpp"

namespace equibench {

/// Exponent used for under-served rankings and contribution boards.
inline constexpr double kDefaultTau = 0.4;
/// Exponents the credit ledger records deltas for.
inline constexpr std::array<double, 3> kLedgerTaus{0.0, 0.4, 1.0};

struct LanguageResult {
  double best_value = 0.0;
  double utility = 0.0;
  std::string system;
  std::string dataset;
  std::string submission_id;
  std::uint64_t seq = 0;
};

struct TaskReport {
  std::string task_id;
  double demographic_avg = 0.0;  // M at tau = 1
  double linguistic_avg = 0.0;   // M at tau = 0
  double gini = 0.0;
  double pop_coverage_pct = 0.0;
  std::size_t covered_language_count = 0;
  std::map<std::string, LanguageResult> per_language;
};

struct UnderservedEntry {
  std::string code;
  std::uint64_t population = 0;
  double utility = 0.0;
  double score = 0.0;
};

struct UnderservedRanking {
  std::string task_id;
  double tau = kDefaultTau;
  std::vector<UnderservedEntry> entries;
};

struct LanguageScore {
  std::string code;
  double best_value = 0.0;
  std::string system;
  std::string dataset;
  std::uint64_t seq = 0;
};

enum class BeneficiaryKind { system, dataset };

std::string_view to_string(BeneficiaryKind kind) noexcept;
std::optional<BeneficiaryKind> parse_beneficiary_kind(std::string_view text) noexcept;

struct CreditEntry {
  std::uint64_t event_seq = 0;
  BeneficiaryKind beneficiary_kind = BeneficiaryKind::system;
  std::string beneficiary_id;
  std::string task_id;
  double tau = 0.0;
  double delta = 0.0;
  Timestamp at{};
};

struct ContributionTotal {
  std::string beneficiary_id;
  double total = 0.0;
  std::size_t events = 0;
};

struct SeriesPoint {
  Timestamp at{};
  std::uint64_t seq = 0;
  double value = 0.0;
};

struct WhatIfResult {
  std::string task_id;
  std::string code;
  double hypothetical_utility = 0.0;
  double current_utility = 0.0;
  double projected_utility = 0.0;
  std::map<double, double> delta_m;  // tau -> projected change in M
  double rank_tau = kDefaultTau;
  std::size_t previous_rank = 0;  // 1-based under-served position
  std::size_t new_rank_of_language = 0;
  std::vector<std::string> top3_before;
  /// Under-served top three once the projection is applied.
  std::vector<std::string> displaced_top3;
};

/// Aggregations over a folded BenchState. Holds non-owning pointers to the
/// registries, which must outlive it. Thread-safe for concurrent readers.
class Leaderboard {
 public:
  Leaderboard(const LanguageRegistry& languages, const TaskRegistry& tasks);

  const LanguageRegistry& languages() const noexcept { return *languages_; }
  const TaskRegistry& tasks() const noexcept { return *tasks_; }

  /// Registry-aligned demand weights, cached per tau.
  std::shared_ptr<const std::vector<double>> demand(double tau) const;

  /// Registry-aligned utilities for one task slice (uncovered = 0).
  std::vector<double> utilities(const TaskState* slice, const TaskDef& task) const;
  std::vector<double> utilities(const BenchState& state, std::string_view task_id) const;

  std::map<std::string, double> best_utility_per_language(const BenchState& state,
                                                          std::string_view task_id) const;
  double global_average(const BenchState& state, std::string_view task_id, double tau) const;
  double global_average(std::span<const double> utilities, double tau) const;

  TaskReport task_report(const BenchState& state, std::string_view task_id) const;

  UnderservedRanking underserved_ranking(const BenchState& state, std::string_view task_id,
                                         double tau = kDefaultTau,
                                         std::optional<std::size_t> limit = {}) const;
  std::vector<UnderservedEntry> underserved_order(std::span<const double> utilities,
                                                  double tau) const;

  std::vector<LanguageScore> language_score_ranking(const BenchState& state,
                                                    std::string_view task_id) const;

  /// Credit entries the event earns against `before`, one per ledger tau
  /// and beneficiary.
  std::vector<CreditEntry> attribute_delta(const BenchState& before, const Event& event) const;

  WhatIfResult what_if(const BenchState& state, std::string_view task_id,
                       std::string_view code, double hypothetical_utility,
                       std::span<const double> taus = kLedgerTaus,
                       double rank_tau = kDefaultTau) const;

 private:
  const LanguageRegistry* languages_;
  const TaskRegistry* tasks_;
  std::vector<std::uint64_t> populations_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::shared_ptr<const std::vector<double>>> demand_cache_;
};

/// Attribution ledger for a whole log, built event by event in seq order.
class CreditLedger {
 public:
  explicit CreditLedger(const Leaderboard& board) : board_(&board) {}

  /// Credits `event` against `state`, then folds the event into `state`.
  void record(BenchState& state, const Event& event);

  /// Replays `events` from an empty state; the folded state is written to
  /// `final_state` when given.
  static CreditLedger build(const Leaderboard& board, std::span<const Event> events,
                            BenchState* final_state = nullptr);

  const std::vector<CreditEntry>& entries() const noexcept { return entries_; }

 private:
  const Leaderboard* board_;
  std::vector<CreditEntry> entries_;
};

/// Credits grouped by beneficiary, summed, highest first (ties by id).
/// Throws Error{domain} unless tau is one of kLedgerTaus.
std::vector<ContributionTotal> contribution_leaderboard(std::span<const CreditEntry> ledger,
                                                        std::string_view task_id, double tau,
                                                        BeneficiaryKind kind);

/// M_tau after each event touching the task, in (at, seq) order.
/// tau must be 0 or 1.
std::vector<SeriesPoint> diachronic_series(const Leaderboard& board,
                                           std::span<const Event> events,
                                           std::string_view task_id, double tau);

}  // namespace equibench
