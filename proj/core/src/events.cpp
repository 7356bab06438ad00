#include "equibench/events.hpp"

#include <cstdio>

namespace equibench {

namespace {

bool take_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDThh:mm:ssZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!take_digits(text, 0, 4, y) || !take_digits(text, 5, 2, mo) ||
      !take_digits(text, 8, 2, d) || !take_digits(text, 11, 2, h) ||
      !take_digits(text, 14, 2, mi) || !take_digits(text, 17, 2, s)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string describe(const LanguageRef& ref) {
  if (const auto* code = std::get_if<std::string>(&ref)) return *code;
  const auto& pair = std::get<LanguagePair>(ref);
  return pair.source + "->" + pair.target;
}

std::vector<std::string> stat_languages(const LanguageRef& ref, LanguageRole role) {
  if (const auto* code = std::get_if<std::string>(&ref)) return {*code};
  const auto& pair = std::get<LanguagePair>(ref);
  switch (role) {
    case LanguageRole::single:
    case LanguageRole::mt_source:
      return {pair.source};
    case LanguageRole::mt_target:
      return {pair.target};
    case LanguageRole::mt_both:
      if (pair.source == pair.target) return {pair.source};
      return {pair.source, pair.target};
  }
  return {pair.source};
}

std::string_view to_string(EventKind kind) noexcept {
  return kind == EventKind::dataset_registered ? "dataset_registered" : "score_submitted";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
  if (text == "dataset_registered") return EventKind::dataset_registered;
  if (text == "score_submitted") return EventKind::score_submitted;
  return std::nullopt;
}

Timestamp timestamp_of(const EventPayload& payload) noexcept {
  if (const auto* reg = std::get_if<DatasetReg>(&payload)) return reg->registered_at;
  return std::get<PerformanceRecord>(payload).submitted_at;
}

const std::string& task_of(const EventPayload& payload) noexcept {
  if (const auto* reg = std::get_if<DatasetReg>(&payload)) return reg->task_id;
  return std::get<PerformanceRecord>(payload).task_id;
}

const TaskState* BenchState::task(std::string_view id) const {
  auto it = tasks.find(id);
  return it == tasks.end() ? nullptr : &it->second;
}

std::set<std::pair<std::string, std::string>> BenchState::covered_pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [task_id, slice] : tasks) {
    for (const auto& [code, entry] : slice.best) out.emplace(task_id, code);
  }
  return out;
}

}  // namespace equibench
