#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "equibench/events.hpp"
#include "equibench/ingest.hpp"
#include "equibench/leaderboard.hpp"
#include "equibench/registry.hpp"
#include "equibench/store.hpp"

namespace equibench {

/// Immutable view of the benchmark at one log position. Readers hold it for
/// as long as they like; the writer publishes a new one per append.
struct BenchView {
  std::uint64_t version = 0;  // last seq folded
  std::shared_ptr<const BenchState> state;
  std::shared_ptr<const std::vector<Event>> events;
  std::shared_ptr<const std::vector<CreditEntry>> ledger;
};

struct SubmitOutcome {
  bool accepted = false;
  std::uint64_t seq = 0;
  ingest::ValidationReport report;

  bool duplicate() const;
};

/// Owns the registries, the log, and the current view. submit() is
/// serialized internally; view() may be called from any thread.
class Engine {
 public:
  Engine(LanguageRegistry languages, TaskRegistry tasks, EventLog log);

  static std::unique_ptr<Engine> open(const std::filesystem::path& registry_path,
                                      const std::filesystem::path& tasks_path,
                                      const std::filesystem::path& log_path);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const LanguageRegistry& languages() const noexcept { return *languages_; }
  const TaskRegistry& tasks() const noexcept { return *tasks_; }
  const Leaderboard& board() const noexcept { return *board_; }

  std::shared_ptr<const BenchView> view() const;

  /// Validate, append, publish. Rejected payloads leave the log untouched.
  SubmitOutcome submit(EventPayload payload);

  /// Writes the current state to `path`.
  void save_snapshot(const std::filesystem::path& path) const;

 private:
  void publish(std::shared_ptr<const BenchState> state,
               std::shared_ptr<const std::vector<CreditEntry>> ledger);

  std::unique_ptr<const LanguageRegistry> languages_;
  std::unique_ptr<const TaskRegistry> tasks_;
  std::unique_ptr<const Leaderboard> board_;

  std::mutex writer_;
  EventLog log_;

  mutable std::mutex view_mutex_;
  std::shared_ptr<const BenchView> view_;
};

}  // namespace equibench
