#pragma once

// JSON documents served by the API and printed by the CLI. Both front ends
// go through these functions, so equal state yields byte-equal bodies.

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "equibench/leaderboard.hpp"
#include "equibench/registry.hpp"

namespace equibench::views {

/// Averages and Gini carry 4 decimals, coverage 2.
double round_to(double value, int decimals);

nlohmann::json task_summary(const TaskDef& task, const TaskState* slice);
nlohmann::json task_report(const TaskReport& report);
nlohmann::json underserved(const UnderservedRanking& ranking);
nlohmann::json language_scores(std::string_view task_id, std::span<const LanguageScore> scores);
nlohmann::json diachronic(std::string_view task_id, double tau, std::span<const SeriesPoint> points);
nlohmann::json contributions(std::string_view task_id, double tau, BeneficiaryKind kind,
                             std::span<const ContributionTotal> totals);
nlohmann::json what_if(const WhatIfResult& result);
nlohmann::json credit_entry(const CreditEntry& entry);

/// Key used for a tau inside JSON objects: "0", "0.4", "1".
std::string tau_key(double tau);

/// Canonical text form: compact, trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace equibench::views
