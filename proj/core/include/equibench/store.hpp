#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equibench/events.hpp"
#include "equibench/registry.hpp"

namespace equibench {

/// Folds one event into `state`. Events may arrive in any order: the best
/// record per (task, language) is chosen by value, then lowest seq.
void apply_event(BenchState& state, const Event& event, const TaskRegistry& tasks);

/// Same as apply_event restricted to a single task's slice.
void apply_to_task(TaskState& slice, const Event& event, const TaskDef& task);

/// State after every event with seq <= upto (all events by default).
BenchState fold_state(std::span<const Event> events, const TaskRegistry& tasks,
                      std::uint64_t upto = std::numeric_limits<std::uint64_t>::max());
/// State after every event with at <= upto, applied in (at, seq) order.
BenchState fold_state_until(std::span<const Event> events, const TaskRegistry& tasks,
                            Timestamp upto);
/// Continues `state` with the events whose seq is past state.last_seq.
BenchState fold_from(BenchState state, std::span<const Event> events,
                     const TaskRegistry& tasks);

/// Append-only, line-delimited JSON event log. A default-constructed log
/// lives in memory only. One writer at a time; not internally synchronized.
class EventLog {
 public:
  EventLog() = default;

  /// Opens (creating if absent) the log at `path` and loads every line.
  /// Throws ParseError naming the line on malformed or out-of-sequence
  /// entries.
  static EventLog open(const std::filesystem::path& path);

  /// Assigns seq = last + 1, writes the line, and returns the stored event.
  /// On a write failure the file is truncated back and Error{io} thrown.
  const Event& append(EventPayload payload);

  std::span<const Event> events() const noexcept { return events_; }
  std::uint64_t last_seq() const noexcept {
    return events_.empty() ? 0 : events_.back().seq;
  }
  std::size_t size() const noexcept { return events_.size(); }
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  std::vector<Event> events_;
};

/// Serializes one event as a single log line without the trailing newline.
std::string encode_log_line(const Event& event);

/// Snapshot file: JSON envelope with a CRC-32 of the canonical state dump.
void save_snapshot(const BenchState& state, const std::filesystem::path& path);
/// Throws Error{checksum} on truncated, unparsable, or tampered files.
BenchState load_snapshot(const std::filesystem::path& path);

std::string encode_snapshot(const BenchState& state);
BenchState decode_snapshot(std::string_view text);

}  // namespace equibench
