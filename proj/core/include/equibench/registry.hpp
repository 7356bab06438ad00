#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace equibench {

/// One world language. `population` counts first-language speakers only.
struct LanguageRecord {
  std::string code;  // ISO 639-3, three lowercase ASCII letters
  std::string name;
  std::uint64_t population = 0;

  friend bool operator==(const LanguageRecord&, const LanguageRecord&) = default;
};

/// True iff `code` is exactly three lowercase ASCII letters.
bool is_iso639_3(std::string_view code) noexcept;

/// Lowercases ASCII letters; other bytes pass through unchanged.
std::string ascii_lower(std::string_view s);

/// Immutable, code-indexed collection of languages. Row order is the file
/// order and is used as the stable index space by the leaderboard.
class LanguageRegistry {
 public:
  LanguageRegistry() = default;

  /// Throws Error{conflict} on duplicate codes and Error{parse} on codes that
  /// are not ISO 639-3 shaped.
  explicit LanguageRegistry(std::vector<LanguageRecord> records);

  const LanguageRecord& resolve(std::string_view code) const;
  std::optional<std::size_t> index_of(std::string_view code) const;
  bool contains(std::string_view code) const { return index_of(code).has_value(); }

  std::span<const LanguageRecord> records() const noexcept { return records_; }
  const LanguageRecord& at(std::size_t index) const { return records_.at(index); }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  std::uint64_t total_population() const noexcept { return total_population_; }

 private:
  std::vector<LanguageRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t total_population_ = 0;
};

/// Parses `iso639_3<TAB>name<TAB>population` rows, no header.
LanguageRegistry parse_language_registry(std::string_view text);
LanguageRegistry load_language_registry(const std::filesystem::path& path);

/// Case-insensitive exact lookup. Throws NotFoundError carrying the code.
inline const LanguageRecord& resolve_language(const LanguageRegistry& registry,
                                              std::string_view code) {
  return registry.resolve(code);
}

inline std::uint64_t total_population(const LanguageRegistry& registry) noexcept {
  return registry.total_population();
}

// ---------------------------------------------------------------------------
// Tasks and metrics

enum class MaxMode { fixed, empirical };

struct MetricDef {
  std::string name;
  double range_min = 0.0;
  double range_max = 100.0;
  MaxMode max_mode = MaxMode::fixed;
  double fixed_max = 100.0;  // meaningful only when max_mode == fixed

  friend bool operator==(const MetricDef&, const MetricDef&) = default;
};

/// How a record's language key is derived. mt_both counts each distinct
/// language of a source/target pair once.
enum class LanguageRole { single, mt_source, mt_target, mt_both };

std::string_view to_string(LanguageRole role) noexcept;
std::string_view to_string(MaxMode mode) noexcept;

inline bool is_translation(LanguageRole role) noexcept {
  return role != LanguageRole::single;
}

struct TaskDef {
  std::string id;
  std::string category;
  MetricDef metric;
  LanguageRole language_role = LanguageRole::single;

  friend bool operator==(const TaskDef&, const TaskDef&) = default;
};

class TaskRegistry {
 public:
  TaskRegistry() = default;
  /// Throws Error{conflict} on duplicate ids and Error{domain} on
  /// ill-formed metrics.
  explicit TaskRegistry(std::vector<TaskDef> tasks);

  const TaskDef& resolve(std::string_view id) const;
  const TaskDef* find(std::string_view id) const noexcept;

  std::span<const TaskDef> tasks() const noexcept { return tasks_; }
  std::size_t size() const noexcept { return tasks_.size(); }

 private:
  std::vector<TaskDef> tasks_;
  std::unordered_map<std::string, std::size_t> index_;
};

TaskRegistry parse_task_registry(std::string_view json_text);
TaskRegistry load_task_registry(const std::filesystem::path& path);

}  // namespace equibench
