#pragma once

// JSON wire format for payloads, log lines and folded state.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equibench/error.hpp"
#include "equibench/events.hpp"

namespace equibench {

/// One problem with one field. `field` is a JSON path such as `.value` or
/// `.languages[2]`.
struct FieldError {
  std::string field;
  std::string code;
  std::string message;

  friend bool operator==(const FieldError&, const FieldError&) = default;
};

/// Decoding failure listing every offending field.
class PayloadError : public Error {
 public:
  explicit PayloadError(std::vector<FieldError> errors);

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

nlohmann::json to_json(const DatasetReg& reg);
nlohmann::json to_json(const PerformanceRecord& record);
nlohmann::json to_json(const EventPayload& payload);
nlohmann::json to_json(const Event& event);
nlohmann::json to_json(const FieldError& error);

/// Strict decoders. Language codes are case-normalized and must be
/// ISO 639-3 shaped; a two-letter code is reported with a suggestion.
PerformanceRecord submission_from_json(const nlohmann::json& doc);
DatasetReg dataset_from_json(const nlohmann::json& doc);
Event event_from_json(const nlohmann::json& doc);

/// Canonical encoding: keys sorted, so equal states dump to equal bytes.
nlohmann::json state_to_json(const BenchState& state);
BenchState state_from_json(const nlohmann::json& doc);

}  // namespace equibench
