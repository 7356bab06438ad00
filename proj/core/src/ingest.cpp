#include "equibench/ingest.hpp"

#include <array>
#include <utility>

namespace equibench::ingest {

using nlohmann::json;

void ValidationReport::fail(std::string field, std::string code, std::string message) {
  ok = false;
  errors.push_back({std::move(field), std::move(code), std::move(message)});
}

std::string_view suggest_iso639_3(std::string_view two_letter) noexcept {
  // Common ISO 639-1 codes. Macrolanguages map to their most-spoken member
  // where the registry keys that member (zh -> cmn).
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 41> kTable{{
      {"am", "amh"}, {"ar", "ara"}, {"bn", "ben"}, {"ca", "cat"}, {"cs", "ces"},
      {"de", "deu"}, {"el", "ell"}, {"en", "eng"}, {"es", "spa"}, {"fa", "fas"},
      {"fi", "fin"}, {"fr", "fra"}, {"gu", "guj"}, {"ha", "hau"}, {"he", "heb"},
      {"hi", "hin"}, {"hu", "hun"}, {"id", "ind"}, {"ig", "ibo"}, {"it", "ita"},
      {"ja", "jpn"}, {"jv", "jav"}, {"kn", "kan"}, {"ko", "kor"}, {"ml", "mal"},
      {"mr", "mar"}, {"nl", "nld"}, {"pa", "pan"}, {"pl", "pol"}, {"pt", "por"},
      {"ro", "ron"}, {"ru", "rus"}, {"sw", "swh"}, {"ta", "tam"}, {"te", "tel"},
      {"th", "tha"}, {"tr", "tur"}, {"ur", "urd"}, {"vi", "vie"}, {"yo", "yor"},
      {"zh", "cmn"},
  }};
  for (const auto& [two, three] : kTable) {
    if (two == two_letter) return three;
  }
  return {};
}

namespace {

json parse_json_or_throw(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw PayloadError({{"$", "json", std::string("malformed JSON: ") + e.what()}});
  }
}

bool looks_like_submission(const json& doc) {
  return doc.is_object() && doc.contains("submission_id");
}

}  // namespace

PerformanceRecord parse_submission(std::string_view bytes) {
  return submission_from_json(parse_json_or_throw(bytes));
}

DatasetReg parse_dataset(std::string_view bytes) {
  return dataset_from_json(parse_json_or_throw(bytes));
}

EventPayload parse_payload(const json& doc) {
  if (looks_like_submission(doc)) return submission_from_json(doc);
  if (doc.is_object() && doc.contains("dataset_id")) return dataset_from_json(doc);
  throw PayloadError({{"$", "kind", "object has neither 'submission_id' nor 'dataset_id'"}});
}

std::vector<BatchItem> parse_batch(std::string_view bytes) {
  std::vector<BatchItem> items;
  auto decode = [&items](std::size_t index, const json& doc) {
    BatchItem item;
    item.index = index;
    try {
      item.payload = parse_payload(doc);
    } catch (const PayloadError& e) {
      item.errors = e.errors();
    }
    items.push_back(std::move(item));
  };

  std::size_t first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '[') {
    const json doc = parse_json_or_throw(bytes);
    std::size_t index = 0;
    for (const auto& element : doc) decode(++index, element);
    return items;
  }

  std::size_t line_no = 0;
  while (!bytes.empty()) {
    ++line_no;
    const auto nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      decode(line_no, json::parse(line));
    } catch (const json::parse_error& e) {
      items.push_back({line_no, std::nullopt, {{"$", "json", std::string("malformed JSON: ") + e.what()}}});
    }
  }
  return items;
}

namespace {

void check_codes(const LanguageRef& ref, const std::string& field,
                 const LanguageRegistry& languages, ValidationReport& report) {
  auto check = [&](const std::string& code, const std::string& path) {
    if (!languages.contains(code)) {
      report.fail(path, "unknown_language", "language '" + code + "' is not in the registry");
    }
  };
  if (const auto* code = std::get_if<std::string>(&ref)) {
    check(*code, field);
  } else {
    const auto& pair = std::get<LanguagePair>(ref);
    check(pair.source, field + ".source");
    check(pair.target, field + ".target");
  }
}

bool shape_matches(const LanguageRef& ref, const TaskDef& task) {
  return std::holds_alternative<LanguagePair>(ref) == is_translation(task.language_role);
}

void validate_dataset(const DatasetReg& reg, const LanguageRegistry& languages,
                      const TaskRegistry& tasks, const BenchState& state,
                      ValidationReport& report) {
  if (state.datasets.count(reg.dataset_id)) {
    report.fail(".dataset_id", "duplicate", "dataset '" + reg.dataset_id + "' is already registered");
  }
  const auto* task = tasks.find(reg.task_id);
  if (!task) {
    report.fail(".task", "unknown_task", "task '" + reg.task_id + "' is not registered");
  }
  if (reg.languages.empty()) report.fail(".languages", "empty", "at least one language is required");

  std::size_t i = 0;
  bool shape_reported = false;
  for (const auto& ref : reg.languages) {
    const bool pair = std::holds_alternative<LanguagePair>(ref);
    const std::string field =
        std::string(pair ? ".language_pairs" : ".languages") + "[" + std::to_string(i++) + "]";
    if (task && !shape_matches(ref, *task) && !shape_reported) {
      shape_reported = true;
      report.fail(pair ? ".language_pairs" : ".languages", "shape",
                  is_translation(task->language_role)
                      ? "translation task '" + task->id + "' needs 'language_pairs'"
                      : "task '" + task->id + "' takes 'languages', not pairs");
    }
    check_codes(ref, field, languages, report);
  }
}

void validate_submission(const PerformanceRecord& rec, const LanguageRegistry& languages,
                         const TaskRegistry& tasks, const BenchState& state,
                         ValidationReport& report) {
  if (state.submission_ids.count(rec.submission_id)) {
    report.fail(".submission_id", "duplicate",
                "submission '" + rec.submission_id + "' was already ingested");
  }
  const auto* task = tasks.find(rec.task_id);
  if (!task) {
    report.fail(".task", "unknown_task", "task '" + rec.task_id + "' is not registered");
  } else {
    const auto& metric = task->metric;
    if (rec.metric_name != metric.name) {
      report.fail(".metric", "metric_mismatch",
                  "task '" + task->id + "' is scored with " + metric.name + ", not " +
                      rec.metric_name);
    }
    if (!(rec.value >= metric.range_min && rec.value <= metric.range_max)) {
      report.fail(".value", "range",
                  "value " + nlohmann::json(rec.value).dump() + " outside [" +
                      nlohmann::json(metric.range_min).dump() + ", " +
                      nlohmann::json(metric.range_max).dump() + "] for " + metric.name);
    } else if (metric.max_mode == MaxMode::fixed && rec.value > metric.fixed_max) {
      report.fail(".value", "range",
                  "value exceeds the theoretical maximum " +
                      nlohmann::json(metric.fixed_max).dump() + " configured for " + task->id);
    }
    if (!shape_matches(rec.language, *task)) {
      report.fail(".language", "shape",
                  is_translation(task->language_role)
                      ? "translation task needs {\"source\", \"target\"}"
                      : "task takes a single ISO 639-3 code");
    }
  }
  check_codes(rec.language, ".language", languages, report);

  auto it = state.datasets.find(rec.dataset_id);
  if (it == state.datasets.end()) {
    report.fail(".dataset", "unknown_dataset", "dataset '" + rec.dataset_id + "' is not registered");
    return;
  }
  const auto& reg = it->second;
  if (reg.task_id != rec.task_id) {
    report.fail(".dataset", "task_mismatch",
                "dataset '" + reg.dataset_id + "' belongs to task '" + reg.task_id + "'");
  }
  if (!reg.languages.count(rec.language)) {
    report.fail(".language", "not_in_dataset",
                "dataset '" + reg.dataset_id + "' does not declare " + describe(rec.language));
  }
  if (rec.submitted_at < reg.registered_at) {
    report.warnings.push_back("submission " + rec.submission_id +
                              " predates the registration of dataset " + reg.dataset_id);
  }
}

}  // namespace

ValidationReport validate_event(const EventPayload& payload, const LanguageRegistry& languages,
                                const TaskRegistry& tasks, const BenchState& state) {
  ValidationReport report;
  if (const auto* reg = std::get_if<DatasetReg>(&payload)) {
    validate_dataset(*reg, languages, tasks, state, report);
  } else {
    validate_submission(std::get<PerformanceRecord>(payload), languages, tasks, state, report);
  }
  return report;
}

}  // namespace equibench::ingest
