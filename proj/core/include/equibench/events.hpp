#pragma once

// Domain records carried by the event log and the folded benchmark state.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "equibench/registry.hpp"

namespace equibench {

/// UTC instant at second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDThh:mm:ssZ`; nullopt on anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct LanguagePair {
  std::string source;
  std::string target;

  friend auto operator<=>(const LanguagePair&, const LanguagePair&) = default;
};

/// A plain ISO 639-3 code, or a source->target pair for translation tasks.
using LanguageRef = std::variant<std::string, LanguagePair>;

std::string describe(const LanguageRef& ref);

/// Language codes a record contributes statistics to under `role`.
/// Single-language refs always map to themselves.
std::vector<std::string> stat_languages(const LanguageRef& ref, LanguageRole role);

struct DatasetReg {
  std::string dataset_id;
  std::string task_id;
  std::set<LanguageRef> languages;
  std::string name;
  std::optional<std::string> source_url;
  Timestamp registered_at{};

  friend bool operator==(const DatasetReg&, const DatasetReg&) = default;
};

struct PerformanceRecord {
  std::string submission_id;
  std::string task_id;
  std::string dataset_id;
  LanguageRef language;
  std::string metric_name;
  double value = 0.0;
  std::string system;
  std::optional<std::string> contributor;
  Timestamp submitted_at{};

  friend bool operator==(const PerformanceRecord&, const PerformanceRecord&) = default;
};

enum class EventKind { dataset_registered, score_submitted };

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

using EventPayload = std::variant<DatasetReg, PerformanceRecord>;

inline EventKind kind_of(const EventPayload& payload) noexcept {
  return std::holds_alternative<DatasetReg>(payload) ? EventKind::dataset_registered
                                                     : EventKind::score_submitted;
}

Timestamp timestamp_of(const EventPayload& payload) noexcept;
const std::string& task_of(const EventPayload& payload) noexcept;

struct Event {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::dataset_registered;
  Timestamp at{};
  EventPayload payload;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Canonical diachronic order: timestamp, then log position.
inline bool chronological_less(const Event& a, const Event& b) noexcept {
  return a.at != b.at ? a.at < b.at : a.seq < b.seq;
}

// ---------------------------------------------------------------------------
// Folded state

struct BestEntry {
  PerformanceRecord record;
  std::uint64_t seq = 0;

  friend bool operator==(const BestEntry&, const BestEntry&) = default;
};

struct TaskState {
  /// Best record per statistics language; ties keep the lowest seq.
  std::map<std::string, BestEntry, std::less<>> best;
  std::set<std::string> datasets;
  std::uint64_t submission_count = 0;
  /// Largest value ever submitted for the task.
  std::optional<double> empirical_max;

  friend bool operator==(const TaskState&, const TaskState&) = default;
};

struct BenchState {
  std::uint64_t last_seq = 0;
  std::uint64_t event_count = 0;
  std::map<std::string, TaskState, std::less<>> tasks;
  std::map<std::string, DatasetReg, std::less<>> datasets;
  std::set<std::string, std::less<>> submission_ids;

  const TaskState* task(std::string_view id) const;
  /// Every (task, language) pair with at least one submission.
  std::set<std::pair<std::string, std::string>> covered_pairs() const;

  friend bool operator==(const BenchState&, const BenchState&) = default;
};

}  // namespace equibench
