#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "equibench/codec.hpp"
#include "equibench/events.hpp"
#include "equibench/registry.hpp"

namespace equibench::ingest {

struct ValidationReport {
  bool ok = true;
  std::vector<FieldError> errors;
  std::vector<std::string> warnings;

  void fail(std::string field, std::string code, std::string message);
};

/// Parse a single submission or dataset document. Throws PayloadError with
/// field-level errors; malformed JSON is reported at path `$`.
PerformanceRecord parse_submission(std::string_view bytes);
DatasetReg parse_dataset(std::string_view bytes);

/// Any payload document; the kind is inferred from `submission_id` versus
/// `dataset_id`.
EventPayload parse_payload(const nlohmann::json& doc);

/// One entry of a batch file. Exactly one of `payload` and `errors` is set.
struct BatchItem {
  std::size_t index = 0;  // 1-based position (line for JSONL)
  std::optional<EventPayload> payload;
  std::vector<FieldError> errors;
};

/// A batch is either a JSON array or JSON Lines of payload objects.
std::vector<BatchItem> parse_batch(std::string_view bytes);

/// Checks a parsed payload against registries and the current state.
/// Pure; never throws for validation failures.
ValidationReport validate_event(const EventPayload& payload, const LanguageRegistry& languages,
                                const TaskRegistry& tasks, const BenchState& state);

/// ISO 639-3 suggestion for a common ISO 639-1 code, or empty.
std::string_view suggest_iso639_3(std::string_view two_letter) noexcept;

}  // namespace equibench::ingest
