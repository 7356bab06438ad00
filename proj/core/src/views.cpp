#include "equibench/views.hpp"

#include <cmath>

namespace equibench::views {

using nlohmann::json;

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

std::string tau_key(double tau) { return json(tau).dump(); }

std::string dump(const json& doc) { return doc.dump() + "\n"; }

json task_summary(const TaskDef& task, const TaskState* slice) {
  json metric{{"name", task.metric.name},
              {"range_min", task.metric.range_min},
              {"range_max", task.metric.range_max},
              {"max_mode", to_string(task.metric.max_mode)}};
  if (task.metric.max_mode == MaxMode::fixed) metric["fixed_max"] = task.metric.fixed_max;
  return json{{"id", task.id},
              {"category", task.category},
              {"metric", std::move(metric)},
              {"language_role", to_string(task.language_role)},
              {"submission_count", slice ? slice->submission_count : 0},
              {"dataset_count", slice ? slice->datasets.size() : 0},
              {"covered_language_count", slice ? slice->best.size() : 0}};
}

json task_report(const TaskReport& report) {
  json per_language = json::object();
  for (const auto& [code, r] : report.per_language) {
    per_language[code] = json{{"best_value", r.best_value},
                              {"utility", r.utility},
                              {"system", r.system},
                              {"dataset", r.dataset},
                              {"submission_id", r.submission_id},
                              {"seq", r.seq}};
  }
  return json{{"task_id", report.task_id},
              {"demographic_avg", round_to(report.demographic_avg, 4)},
              {"linguistic_avg", round_to(report.linguistic_avg, 4)},
              {"gini", round_to(report.gini, 4)},
              {"pop_coverage_pct", round_to(report.pop_coverage_pct, 2)},
              {"covered_language_count", report.covered_language_count},
              {"per_language", std::move(per_language)}};
}

json underserved(const UnderservedRanking& ranking) {
  json entries = json::array();
  std::size_t rank = 0;
  for (const auto& e : ranking.entries) {
    entries.push_back(json{{"rank", ++rank},
                           {"code", e.code},
                           {"population", e.population},
                           {"utility", e.utility},
                           {"score", e.score}});
  }
  return json{{"task_id", ranking.task_id}, {"tau", ranking.tau}, {"entries", std::move(entries)}};
}

json language_scores(std::string_view task_id, std::span<const LanguageScore> scores) {
  json entries = json::array();
  std::size_t rank = 0;
  for (const auto& s : scores) {
    entries.push_back(json{{"rank", ++rank},
                           {"code", s.code},
                           {"best_value", s.best_value},
                           {"system", s.system},
                           {"dataset", s.dataset},
                           {"seq", s.seq}});
  }
  return json{{"task_id", task_id}, {"languages", std::move(entries)}};
}

json diachronic(std::string_view task_id, double tau, std::span<const SeriesPoint> points) {
  json series = json::array();
  for (const auto& p : points) {
    series.push_back(json{{"at", format_timestamp(p.at)}, {"seq", p.seq}, {"value", p.value}});
  }
  return json{{"task_id", task_id}, {"tau", tau}, {"points", std::move(series)}};
}

json contributions(std::string_view task_id, double tau, BeneficiaryKind kind,
                   std::span<const ContributionTotal> totals) {
  json entries = json::array();
  std::size_t rank = 0;
  for (const auto& t : totals) {
    entries.push_back(json{{"rank", ++rank},
                           {"beneficiary_id", t.beneficiary_id},
                           {"total", t.total},
                           {"events", t.events}});
  }
  return json{{"task_id", task_id},
              {"tau", tau},
              {"kind", to_string(kind)},
              {"entries", std::move(entries)}};
}

json what_if(const WhatIfResult& r) {
  json delta = json::object();
  for (const auto& [tau, d] : r.delta_m) delta[tau_key(tau)] = d;
  return json{{"task_id", r.task_id},
              {"hypothesis", json{{"code", r.code}, {"utility", r.hypothetical_utility}}},
              {"current_utility", r.current_utility},
              {"projected_utility", r.projected_utility},
              {"delta_m", std::move(delta)},
              {"rank_tau", r.rank_tau},
              {"previous_rank", r.previous_rank},
              {"new_rank_of_language", r.new_rank_of_language},
              {"top3_before", r.top3_before},
              {"displaced_top3", r.displaced_top3}};
}

json credit_entry(const CreditEntry& e) {
  return json{{"event_seq", e.event_seq},
              {"beneficiary_kind", to_string(e.beneficiary_kind)},
              {"beneficiary_id", e.beneficiary_id},
              {"task_id", e.task_id},
              {"tau", e.tau},
              {"delta", e.delta},
              {"at", format_timestamp(e.at)}};
}

}  // namespace equibench::views
