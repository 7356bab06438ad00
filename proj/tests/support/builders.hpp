#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "equibench/events.hpp"
#include "equibench/registry.hpp"
#include "equibench/store.hpp"

// Terse constructors for registries and payloads used across tests.
namespace equibench::test {

inline Timestamp day(int n) {
  return Timestamp{std::chrono::sys_days{std::chrono::year{2022} / 1 / 1}} +
         std::chrono::days{n};
}

inline LanguageRegistry make_languages(std::vector<std::pair<std::string, std::uint64_t>> pops) {
  std::vector<LanguageRecord> records;
  for (auto& [code, pop] : pops) records.push_back({code, "Lang " + code, pop});
  return LanguageRegistry(std::move(records));
}

inline TaskDef fixed_task(std::string id, double max = 100.0,
                          LanguageRole role = LanguageRole::single, std::string metric = "F1") {
  return TaskDef{std::move(id), "test", MetricDef{std::move(metric), 0.0, max, MaxMode::fixed, max},
                 role};
}

inline TaskDef empirical_task(std::string id, LanguageRole role = LanguageRole::single) {
  return TaskDef{std::move(id), "test", MetricDef{"Bleu", 0.0, 100.0, MaxMode::empirical, 100.0},
                 role};
}

inline DatasetReg dataset(std::string id, std::string task, std::vector<std::string> codes,
                          int at = 0) {
  DatasetReg reg;
  reg.dataset_id = std::move(id);
  reg.task_id = std::move(task);
  for (auto& c : codes) reg.languages.insert(LanguageRef{std::move(c)});
  reg.name = reg.dataset_id;
  reg.registered_at = day(at);
  return reg;
}

inline DatasetReg pair_dataset(std::string id, std::string task,
                               std::vector<std::pair<std::string, std::string>> pairs,
                               int at = 0) {
  DatasetReg reg;
  reg.dataset_id = std::move(id);
  reg.task_id = std::move(task);
  for (auto& [s, t] : pairs) reg.languages.insert(LanguageRef{LanguagePair{s, t}});
  reg.name = reg.dataset_id;
  reg.registered_at = day(at);
  return reg;
}

inline PerformanceRecord score(std::string id, std::string task, std::string ds, LanguageRef lang,
                               double value, std::string system, int at = 1,
                               std::string metric = "F1") {
  PerformanceRecord r;
  r.submission_id = std::move(id);
  r.task_id = std::move(task);
  r.dataset_id = std::move(ds);
  r.language = std::move(lang);
  r.metric_name = std::move(metric);
  r.value = value;
  r.system = std::move(system);
  r.submitted_at = day(at);
  return r;
}

/// Wraps payloads as events with seq 1..n and at = payload timestamp.
inline std::vector<Event> as_events(std::vector<EventPayload> payloads) {
  std::vector<Event> events;
  std::uint64_t seq = 0;
  for (auto& p : payloads) {
    Event e;
    e.seq = ++seq;
    e.kind = kind_of(p);
    e.at = timestamp_of(p);
    e.payload = std::move(p);
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace equibench::test
