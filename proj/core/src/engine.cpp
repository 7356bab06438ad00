#include "equibench/engine.hpp"

#include "equibench/error.hpp"

namespace equibench {

bool SubmitOutcome::duplicate() const {
  for (const auto& e : report.errors) {
    if (e.code == "duplicate") return true;
  }
  return false;
}

Engine::Engine(LanguageRegistry languages, TaskRegistry tasks, EventLog log)
    : languages_(std::make_unique<const LanguageRegistry>(std::move(languages))),
      tasks_(std::make_unique<const TaskRegistry>(std::move(tasks))),
      board_(std::make_unique<const Leaderboard>(*languages_, *tasks_)),
      log_(std::move(log)) {
  BenchState state;
  auto ledger = CreditLedger::build(*board_, log_.events(), &state);
  publish(std::make_shared<const BenchState>(std::move(state)),
          std::make_shared<const std::vector<CreditEntry>>(ledger.entries()));
}

std::unique_ptr<Engine> Engine::open(const std::filesystem::path& registry_path,
                                     const std::filesystem::path& tasks_path,
                                     const std::filesystem::path& log_path) {
  return std::make_unique<Engine>(load_language_registry(registry_path),
                                  load_task_registry(tasks_path), EventLog::open(log_path));
}

std::shared_ptr<const BenchView> Engine::view() const {
  std::lock_guard lock(view_mutex_);
  return view_;
}

void Engine::publish(std::shared_ptr<const BenchState> state,
                     std::shared_ptr<const std::vector<CreditEntry>> ledger) {
  auto next = std::make_shared<BenchView>();
  next->version = log_.last_seq();
  next->state = std::move(state);
  next->events = std::make_shared<const std::vector<Event>>(log_.events().begin(), log_.events().end());
  next->ledger = std::move(ledger);
  std::lock_guard lock(view_mutex_);
  view_ = std::move(next);
}

SubmitOutcome Engine::submit(EventPayload payload) {
  std::lock_guard writer(writer_);
  const auto current = view();

  SubmitOutcome outcome;
  outcome.report = ingest::validate_event(payload, *languages_, *tasks_, *current->state);
  if (!outcome.report.ok) return outcome;

  const Event& event = log_.append(std::move(payload));
  auto state = std::make_shared<BenchState>(*current->state);
  auto ledger = std::make_shared<std::vector<CreditEntry>>(*current->ledger);
  auto credits = board_->attribute_delta(*state, event);
  ledger->insert(ledger->end(), credits.begin(), credits.end());
  apply_event(*state, event, *tasks_);

  outcome.accepted = true;
  outcome.seq = event.seq;
  publish(std::move(state), std::move(ledger));
  return outcome;
}

void Engine::save_snapshot(const std::filesystem::path& path) const {
  equibench::save_snapshot(*view()->state, path);
}

}  // namespace equibench
