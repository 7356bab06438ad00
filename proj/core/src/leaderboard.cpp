#include "equibench/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "equibench/error.hpp"
#include "equibench/metrics.hpp"
#include "equibench/store.hpp"

namespace equibench {

std::string_view to_string(BeneficiaryKind kind) noexcept {
  return kind == BeneficiaryKind::system ? "system" : "dataset";
}

std::optional<BeneficiaryKind> parse_beneficiary_kind(std::string_view text) noexcept {
  if (text == "system") return BeneficiaryKind::system;
  if (text == "dataset") return BeneficiaryKind::dataset;
  return std::nullopt;
}

Leaderboard::Leaderboard(const LanguageRegistry& languages, const TaskRegistry& tasks)
    : languages_(&languages), tasks_(&tasks) {
  populations_.reserve(languages.size());
  for (const auto& rec : languages.records()) populations_.push_back(rec.population);
}

std::shared_ptr<const std::vector<double>> Leaderboard::demand(double tau) const {
  std::lock_guard lock(cache_mutex_);
  auto it = demand_cache_.find(tau);
  if (it != demand_cache_.end()) return it->second;
  auto weights = std::make_shared<const std::vector<double>>(metrics::demand_vector(populations_, tau));
  demand_cache_.emplace(tau, weights);
  return weights;
}

std::vector<double> Leaderboard::utilities(const TaskState* slice, const TaskDef& task) const {
  std::vector<double> u(languages_->size(), 0.0);
  if (!slice || slice->best.empty()) return u;

  double denominator = 0.0;
  if (task.metric.max_mode == MaxMode::fixed) {
    denominator = task.metric.fixed_max;
  } else if (slice->empirical_max) {
    denominator = *slice->empirical_max;
  }
  // Empirical max of zero: every submission scored 0, so every utility is 0.
  if (denominator <= 0.0) return u;

  for (const auto& [code, entry] : slice->best) {
    const auto idx = languages_->index_of(code);
    if (!idx) throw NotFoundError("language", code);
    u[*idx] = metrics::utility(entry.record.value, denominator);
  }
  return u;
}

std::vector<double> Leaderboard::utilities(const BenchState& state,
                                           std::string_view task_id) const {
  const auto& task = tasks_->resolve(task_id);
  return utilities(state.task(task.id), task);
}

std::map<std::string, double> Leaderboard::best_utility_per_language(
    const BenchState& state, std::string_view task_id) const {
  const auto u = utilities(state, task_id);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < u.size(); ++i) out.emplace(languages_->at(i).code, u[i]);
  return out;
}

double Leaderboard::global_average(std::span<const double> utilities, double tau) const {
  return metrics::weighted_sum(*demand(tau), utilities);
}

double Leaderboard::global_average(const BenchState& state, std::string_view task_id,
                                   double tau) const {
  return global_average(utilities(state, task_id), tau);
}

TaskReport Leaderboard::task_report(const BenchState& state, std::string_view task_id) const {
  const auto& task = tasks_->resolve(task_id);
  const auto* slice = state.task(task.id);
  const auto u = utilities(slice, task);

  TaskReport report;
  report.task_id = task.id;
  report.demographic_avg = global_average(u, 1.0);
  report.linguistic_avg = global_average(u, 0.0);
  report.gini = metrics::gini_or_supremum(u);

  std::set<std::string> covered;
  if (slice) {
    for (const auto& [code, entry] : slice->best) {
      covered.insert(code);
      const auto idx = *languages_->index_of(code);
      report.per_language.emplace(
          code, LanguageResult{entry.record.value, u[idx], entry.record.system,
                               entry.record.dataset_id, entry.record.submission_id, entry.seq});
    }
  }
  report.covered_language_count = covered.size();
  report.pop_coverage_pct = metrics::population_coverage(covered, *languages_);
  return report;
}

std::vector<UnderservedEntry> Leaderboard::underserved_order(std::span<const double> utilities,
                                                             double tau) const {
  const auto weights = demand(tau);
  std::vector<UnderservedEntry> entries;
  entries.reserve(utilities.size());
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    const auto& rec = languages_->at(i);
    entries.push_back({rec.code, rec.population, utilities[i], (*weights)[i] * (1.0 - utilities[i])});
  }
  std::sort(entries.begin(), entries.end(), [](const UnderservedEntry& a, const UnderservedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.population != b.population) return a.population > b.population;
    return a.code < b.code;
  });
  return entries;
}

UnderservedRanking Leaderboard::underserved_ranking(const BenchState& state,
                                                    std::string_view task_id, double tau,
                                                    std::optional<std::size_t> limit) const {
  const auto& task = tasks_->resolve(task_id);
  UnderservedRanking ranking;
  ranking.task_id = task.id;
  ranking.tau = tau;
  ranking.entries = underserved_order(utilities(state.task(task.id), task), tau);
  if (limit && *limit < ranking.entries.size()) ranking.entries.resize(*limit);
  return ranking;
}

std::vector<LanguageScore> Leaderboard::language_score_ranking(const BenchState& state,
                                                               std::string_view task_id) const {
  const auto& task = tasks_->resolve(task_id);
  std::vector<LanguageScore> out;
  if (const auto* slice = state.task(task.id)) {
    for (const auto& [code, entry] : slice->best) {
      out.push_back({code, entry.record.value, entry.record.system, entry.record.dataset_id,
                     entry.seq});
    }
  }
  std::sort(out.begin(), out.end(), [](const LanguageScore& a, const LanguageScore& b) {
    if (a.best_value != b.best_value) return a.best_value > b.best_value;
    if (a.seq != b.seq) return a.seq < b.seq;
    return a.code < b.code;
  });
  return out;
}

std::vector<CreditEntry> Leaderboard::attribute_delta(const BenchState& before,
                                                      const Event& event) const {
  const auto& task = tasks_->resolve(task_of(event.payload));
  std::vector<CreditEntry> entries;

  if (const auto* reg = std::get_if<DatasetReg>(&event.payload)) {
    for (double tau : kLedgerTaus) {
      entries.push_back({event.seq, BeneficiaryKind::dataset, reg->dataset_id, task.id, tau, 0.0,
                         event.at});
    }
    return entries;
  }

  const auto& rec = std::get<PerformanceRecord>(event.payload);
  const TaskState* slice_before = before.task(task.id);
  TaskState slice_after = slice_before ? *slice_before : TaskState{};
  apply_to_task(slice_after, event, task);

  bool first_cover = false;
  for (const auto& code : stat_languages(rec.language, task.language_role)) {
    if (!slice_before || !slice_before->best.count(code)) first_cover = true;
  }

  const auto u_before = utilities(slice_before, task);
  const auto u_after = utilities(&slice_after, task);
  std::array<double, kLedgerTaus.size()> deltas{};
  for (std::size_t i = 0; i < kLedgerTaus.size(); ++i) {
    deltas[i] = global_average(u_after, kLedgerTaus[i]) - global_average(u_before, kLedgerTaus[i]);
  }

  for (std::size_t i = 0; i < kLedgerTaus.size(); ++i) {
    entries.push_back({event.seq, BeneficiaryKind::system, rec.system, task.id, kLedgerTaus[i],
                       deltas[i], event.at});
  }
  if (first_cover) {
    for (std::size_t i = 0; i < kLedgerTaus.size(); ++i) {
      entries.push_back({event.seq, BeneficiaryKind::dataset, rec.dataset_id, task.id,
                         kLedgerTaus[i], deltas[i], event.at});
    }
  }
  return entries;
}

WhatIfResult Leaderboard::what_if(const BenchState& state, std::string_view task_id,
                                  std::string_view code, double hypothetical_utility,
                                  std::span<const double> taus, double rank_tau) const {
  const auto& task = tasks_->resolve(task_id);
  const auto idx = languages_->index_of(code);
  if (!idx) throw NotFoundError("language", std::string(code));
  if (!(hypothetical_utility >= 0.0 && hypothetical_utility <= 1.0)) {
    throw Error(ErrorKind::domain, "hypothetical utility must lie in [0, 1]");
  }

  const auto current = utilities(state.task(task.id), task);
  auto projected = current;
  projected[*idx] = std::max(current[*idx], hypothetical_utility);

  WhatIfResult result;
  result.task_id = task.id;
  result.code = languages_->at(*idx).code;
  result.hypothetical_utility = hypothetical_utility;
  result.current_utility = current[*idx];
  result.projected_utility = projected[*idx];
  result.rank_tau = rank_tau;
  for (double tau : taus) {
    result.delta_m[tau] = global_average(projected, tau) - global_average(current, tau);
  }

  auto rank_and_top = [&](std::span<const double> u, std::size_t& rank,
                          std::vector<std::string>& top) {
    const auto order = underserved_order(u, rank_tau);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i < 3) top.push_back(order[i].code);
      if (order[i].code == result.code) rank = i + 1;
    }
  };
  rank_and_top(current, result.previous_rank, result.top3_before);
  rank_and_top(projected, result.new_rank_of_language, result.displaced_top3);
  return result;
}

// ---------------------------------------------------------------------------

void CreditLedger::record(BenchState& state, const Event& event) {
  auto credits = board_->attribute_delta(state, event);
  entries_.insert(entries_.end(), std::make_move_iterator(credits.begin()),
                  std::make_move_iterator(credits.end()));
  apply_event(state, event, board_->tasks());
}

CreditLedger CreditLedger::build(const Leaderboard& board, std::span<const Event> events,
                                 BenchState* final_state) {
  CreditLedger ledger(board);
  BenchState state;
  for (const auto& event : events) ledger.record(state, event);
  if (final_state) *final_state = std::move(state);
  return ledger;
}

std::vector<ContributionTotal> contribution_leaderboard(std::span<const CreditEntry> ledger,
                                                        std::string_view task_id, double tau,
                                                        BeneficiaryKind kind) {
  if (std::find(kLedgerTaus.begin(), kLedgerTaus.end(), tau) == kLedgerTaus.end()) {
    throw Error(ErrorKind::domain, "contribution credits are recorded only for tau 0, 0.4 and 1");
  }
  std::map<std::string, ContributionTotal> grouped;
  for (const auto& entry : ledger) {
    if (entry.task_id != task_id || entry.tau != tau || entry.beneficiary_kind != kind) continue;
    auto& total = grouped[entry.beneficiary_id];
    total.beneficiary_id = entry.beneficiary_id;
    total.total += entry.delta;
    ++total.events;
  }
  std::vector<ContributionTotal> out;
  out.reserve(grouped.size());
  for (auto& [id, total] : grouped) out.push_back(std::move(total));
  std::stable_sort(out.begin(), out.end(), [](const ContributionTotal& a, const ContributionTotal& b) {
    return a.total > b.total;
  });
  return out;
}

std::vector<SeriesPoint> diachronic_series(const Leaderboard& board, std::span<const Event> events,
                                           std::string_view task_id, double tau) {
  if (tau != 0.0 && tau != 1.0) {
    throw Error(ErrorKind::domain, "diachronic series are available for tau 0 and 1");
  }
  const auto& task = board.tasks().resolve(task_id);

  std::vector<const Event*> touching;
  for (const auto& event : events) {
    if (task_of(event.payload) == task.id) touching.push_back(&event);
  }
  std::sort(touching.begin(), touching.end(),
            [](const Event* a, const Event* b) { return chronological_less(*a, *b); });

  TaskState slice;
  std::vector<SeriesPoint> series;
  series.reserve(touching.size());
  for (const auto* event : touching) {
    apply_to_task(slice, *event, task);
    series.push_back({event->at, event->seq, board.global_average(board.utilities(&slice, task), tau)});
  }
  return series;
}

}  // namespace equibench
