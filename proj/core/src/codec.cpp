#include "equibench/codec.hpp"

#include <cmath>

#include "equibench/ingest.hpp"

namespace equibench {

using nlohmann::json;

namespace {

std::string join_messages(const std::vector<FieldError>& errors) {
  std::string out = "invalid payload";
  for (const auto& e : errors) out += "; " + e.field + ": " + e.message;
  return out;
}

/// Collects field errors while decoding one object.
class Reader {
 public:
  Reader(const json& doc, std::string prefix = "") : doc_(doc), prefix_(std::move(prefix)) {
    if (!doc_.is_object()) fail("", "type", "expected a JSON object");
  }

  std::string path(std::string_view key) const { return prefix_ + "." + std::string(key); }

  void fail(std::string field, std::string code, std::string message) {
    errors_.push_back({field.empty() ? (prefix_.empty() ? "$" : prefix_) : std::move(field),
                       std::move(code), std::move(message)});
  }

  const json* get(std::string_view key, bool required) {
    if (!doc_.is_object()) return nullptr;
    auto it = doc_.find(key);
    if (it == doc_.end() || (!required && it->is_null())) {
      if (required) fail(path(key), "missing", "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  std::string string(std::string_view key, bool allow_empty = false) {
    const json* v = get(key, true);
    if (!v) return {};
    if (!v->is_string()) {
      fail(path(key), "type", "expected a string");
      return {};
    }
    auto s = v->get<std::string>();
    if (s.empty() && !allow_empty) fail(path(key), "empty", "must not be empty");
    return s;
  }

  std::optional<std::string> optional_string(std::string_view key) {
    const json* v = get(key, false);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(path(key), "type", "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  double number(std::string_view key) {
    const json* v = get(key, true);
    if (!v) return 0.0;
    if (!v->is_number()) {
      fail(path(key), "type", "expected a number");
      return 0.0;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(path(key), "type", "expected a finite number");
    return d;
  }

  Timestamp timestamp(std::string_view key) {
    const json* v = get(key, true);
    if (!v) return {};
    if (!v->is_string()) {
      fail(path(key), "type", "expected a timestamp string");
      return {};
    }
    auto ts = parse_timestamp(v->get_ref<const std::string&>());
    if (!ts) {
      fail(path(key), "timestamp", "expected UTC timestamp YYYY-MM-DDThh:mm:ssZ");
      return {};
    }
    return *ts;
  }

  /// Normalizes an ISO 639-3 code found at `field`.
  std::string code(const json& v, const std::string& field) {
    if (!v.is_string()) {
      fail(field, "type", "expected an ISO 639-3 code string");
      return {};
    }
    const auto& raw = v.get_ref<const std::string&>();
    auto lowered = ascii_lower(raw);
    if (is_iso639_3(lowered)) return lowered;
    std::string message = "'" + raw + "' is not an ISO 639-3 code (three letters)";
    if (lowered.size() == 2) {
      auto hint = ingest::suggest_iso639_3(lowered);
      message += hint.empty() ? "; two-letter ISO 639-1 codes are not accepted"
                              : "; did you mean '" + std::string(hint) + "'?";
    }
    fail(field, "code_format", std::move(message));
    return {};
  }

  std::optional<LanguagePair> pair_from_array(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) {
      fail(field, "type", "expected a [source, target] pair");
      return std::nullopt;
    }
    const auto before = errors_.size();
    LanguagePair pair{code(v[0], field + "[0]"), code(v[1], field + "[1]")};
    if (errors_.size() != before) return std::nullopt;
    return pair;
  }

  std::optional<LanguageRef> language(std::string_view key) {
    const json* v = get(key, true);
    if (!v) return std::nullopt;
    const auto field = path(key);
    if (v->is_object()) {
      if (!v->contains("source") || !v->contains("target")) {
        fail(field, "shape", "language pair needs 'source' and 'target'");
        return std::nullopt;
      }
      const auto before = errors_.size();
      LanguagePair pair{code(v->at("source"), field + ".source"),
                        code(v->at("target"), field + ".target")};
      if (errors_.size() != before) return std::nullopt;
      return LanguageRef{std::move(pair)};
    }
    const auto before = errors_.size();
    auto c = code(*v, field);
    if (errors_.size() != before) return std::nullopt;
    return LanguageRef{std::move(c)};
  }

  void finish() const {
    if (!errors_.empty()) throw PayloadError(errors_);
  }

 private:
  const json& doc_;
  std::string prefix_;
  std::vector<FieldError> errors_;
};

json language_to_json(const LanguageRef& ref) {
  if (const auto* code = std::get_if<std::string>(&ref)) return *code;
  const auto& pair = std::get<LanguagePair>(ref);
  return json{{"source", pair.source}, {"target", pair.target}};
}

}  // namespace

PayloadError::PayloadError(std::vector<FieldError> errors)
    : Error(ErrorKind::parse, join_messages(errors)), errors_(std::move(errors)) {}

json to_json(const FieldError& error) {
  return json{{"field", error.field}, {"code", error.code}, {"message", error.message}};
}

json to_json(const PerformanceRecord& record) {
  json doc{{"submission_id", record.submission_id},
           {"task", record.task_id},
           {"dataset", record.dataset_id},
           {"language", language_to_json(record.language)},
           {"metric", record.metric_name},
           {"value", record.value},
           {"system", record.system},
           {"submitted_at", format_timestamp(record.submitted_at)}};
  if (record.contributor) doc["contributor"] = *record.contributor;
  return doc;
}

json to_json(const DatasetReg& reg) {
  json doc{{"dataset_id", reg.dataset_id},
           {"task", reg.task_id},
           {"name", reg.name},
           {"registered_at", format_timestamp(reg.registered_at)}};
  json singles = json::array();
  json pairs = json::array();
  for (const auto& ref : reg.languages) {
    if (const auto* code = std::get_if<std::string>(&ref)) {
      singles.push_back(*code);
    } else {
      const auto& p = std::get<LanguagePair>(ref);
      pairs.push_back(json::array({p.source, p.target}));
    }
  }
  if (pairs.empty()) {
    doc["languages"] = std::move(singles);
  } else {
    doc["language_pairs"] = std::move(pairs);
  }
  if (reg.source_url) doc["source_url"] = *reg.source_url;
  return doc;
}

json to_json(const EventPayload& payload) {
  return std::visit([](const auto& p) { return to_json(p); }, payload);
}

json to_json(const Event& event) {
  return json{{"seq", event.seq},
              {"kind", to_string(event.kind)},
              {"at", format_timestamp(event.at)},
              {"payload", to_json(event.payload)}};
}

PerformanceRecord submission_from_json(const json& doc) {
  Reader r(doc);
  PerformanceRecord rec;
  rec.submission_id = r.string("submission_id");
  rec.task_id = r.string("task");
  rec.dataset_id = r.string("dataset");
  auto lang = r.language("language");
  rec.metric_name = r.string("metric");
  rec.value = r.number("value");
  rec.system = r.string("system");
  rec.contributor = r.optional_string("contributor");
  rec.submitted_at = r.timestamp("submitted_at");
  r.finish();
  rec.language = std::move(*lang);
  return rec;
}

DatasetReg dataset_from_json(const json& doc) {
  Reader r(doc);
  DatasetReg reg;
  reg.dataset_id = r.string("dataset_id");
  reg.task_id = r.string("task");
  reg.name = r.string("name");
  reg.source_url = r.optional_string("source_url");
  reg.registered_at = r.timestamp("registered_at");

  const bool has_langs = doc.is_object() && doc.contains("languages");
  const bool has_pairs = doc.is_object() && doc.contains("language_pairs");
  if (has_langs && has_pairs) {
    r.fail(r.path("languages"), "shape", "give either 'languages' or 'language_pairs', not both");
  } else if (!has_langs && !has_pairs) {
    if (doc.is_object()) r.fail(r.path("languages"), "missing", "required field is missing");
  } else if (has_langs) {
    const auto& arr = doc.at("languages");
    const auto field = r.path("languages");
    if (!arr.is_array()) {
      r.fail(field, "type", "expected an array of ISO 639-3 codes");
    } else if (arr.empty()) {
      r.fail(field, "empty", "at least one language is required");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (arr[i].is_array()) {
          r.fail(field + "[" + std::to_string(i) + "]", "shape",
                 "language pairs belong in 'language_pairs'");
          continue;
        }
        auto c = r.code(arr[i], field + "[" + std::to_string(i) + "]");
        if (!c.empty()) reg.languages.insert(LanguageRef{std::move(c)});
      }
    }
  } else {
    const auto& arr = doc.at("language_pairs");
    const auto field = r.path("language_pairs");
    if (!arr.is_array()) {
      r.fail(field, "type", "expected an array of [source, target] pairs");
    } else if (arr.empty()) {
      r.fail(field, "empty", "at least one language pair is required");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (auto p = r.pair_from_array(arr[i], field + "[" + std::to_string(i) + "]")) {
          reg.languages.insert(LanguageRef{std::move(*p)});
        }
      }
    }
  }
  r.finish();
  return reg;
}

Event event_from_json(const json& doc) {
  Reader r(doc);
  Event event;
  const json* seq = r.get("seq", true);
  if (seq && !seq->is_number_unsigned()) r.fail(".seq", "type", "expected a positive integer");
  const auto kind_text = r.string("kind");
  event.at = r.timestamp("at");
  const json* payload = r.get("payload", true);
  std::optional<EventKind> kind;
  if (!kind_text.empty()) {
    kind = parse_event_kind(kind_text);
    if (!kind) r.fail(".kind", "enum", "expected dataset_registered or score_submitted");
  }
  r.finish();

  event.seq = seq->get<std::uint64_t>();
  event.kind = *kind;
  try {
    if (event.kind == EventKind::dataset_registered) {
      event.payload = dataset_from_json(*payload);
    } else {
      event.payload = submission_from_json(*payload);
    }
  } catch (const PayloadError& e) {
    auto errors = e.errors();
    for (auto& fe : errors) fe.field = ".payload" + (fe.field == "$" ? "" : fe.field);
    throw PayloadError(std::move(errors));
  }
  if (timestamp_of(event.payload) != event.at) {
    throw PayloadError({{".at", "mismatch", "event time differs from the payload timestamp"}});
  }
  return event;
}

// ---------------------------------------------------------------------------
// State

json state_to_json(const BenchState& state) {
  json tasks = json::object();
  for (const auto& [task_id, slice] : state.tasks) {
    json best = json::object();
    for (const auto& [code, entry] : slice.best) {
      best[code] = json{{"seq", entry.seq}, {"record", to_json(entry.record)}};
    }
    tasks[task_id] = json{{"best", std::move(best)},
                          {"datasets", slice.datasets},
                          {"submission_count", slice.submission_count},
                          {"empirical_max", slice.empirical_max ? json(*slice.empirical_max)
                                                                : json(nullptr)}};
  }
  json datasets = json::object();
  for (const auto& [id, reg] : state.datasets) datasets[id] = to_json(reg);
  return json{{"last_seq", state.last_seq},
              {"event_count", state.event_count},
              {"tasks", std::move(tasks)},
              {"datasets", std::move(datasets)},
              {"submission_ids", state.submission_ids}};
}

BenchState state_from_json(const json& doc) {
  BenchState state;
  state.last_seq = doc.at("last_seq").get<std::uint64_t>();
  state.event_count = doc.at("event_count").get<std::uint64_t>();
  for (const auto& [task_id, t] : doc.at("tasks").items()) {
    TaskState slice;
    for (const auto& [code, entry] : t.at("best").items()) {
      slice.best.emplace(code, BestEntry{submission_from_json(entry.at("record")),
                                         entry.at("seq").get<std::uint64_t>()});
    }
    for (const auto& id : t.at("datasets")) slice.datasets.insert(id.get<std::string>());
    slice.submission_count = t.at("submission_count").get<std::uint64_t>();
    const auto& emax = t.at("empirical_max");
    if (!emax.is_null()) slice.empirical_max = emax.get<double>();
    state.tasks.emplace(task_id, std::move(slice));
  }
  for (const auto& [id, reg] : doc.at("datasets").items()) {
    state.datasets.emplace(id, dataset_from_json(reg));
  }
  for (const auto& id : doc.at("submission_ids")) {
    state.submission_ids.insert(id.get<std::string>());
  }
  return state;
}

}  // namespace equibench
