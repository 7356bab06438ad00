#include "equibench/registry.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equibench/error.hpp"

namespace equibench {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::validation: return "validation";
    case ErrorKind::checksum: return "checksum";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

bool is_iso639_3(std::string_view code) noexcept {
  if (code.size() != 3) return false;
  for (char c : code) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

LanguageRegistry::LanguageRegistry(std::vector<LanguageRecord> records)
    : records_(std::move(records)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (!is_iso639_3(rec.code)) {
      throw Error(ErrorKind::parse, "language code '" + rec.code + "' is not ISO 639-3");
    }
    if (!index_.emplace(rec.code, i).second) {
      throw Error(ErrorKind::conflict, "duplicate language code '" + rec.code + "'");
    }
    total_population_ += rec.population;
  }
}

std::optional<std::size_t> LanguageRegistry::index_of(std::string_view code) const {
  auto it = index_.find(ascii_lower(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const LanguageRecord& LanguageRegistry::resolve(std::string_view code) const {
  auto idx = index_of(code);
  if (!idx) throw NotFoundError("language", std::string(code));
  return records_[*idx];
}

LanguageRegistry parse_language_registry(std::string_view text) {
  std::vector<LanguageRecord> records;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (!is_iso639_3(cols[0])) {
      throw ParseError(line_no, "bad ISO 639-3 code '" + std::string(cols[0]) + "'");
    }
    std::uint64_t population = 0;
    auto [ptr, ec] =
        std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), population);
    if (cols[2].empty() || ec != std::errc{} || ptr != cols[2].data() + cols[2].size()) {
      throw ParseError(line_no, "population '" + std::string(cols[2]) +
                                    "' is not a non-negative integer");
    }
    std::string code(cols[0]);
    if (auto [it, fresh] = first_line.emplace(code, line_no); !fresh) {
      throw Error(ErrorKind::conflict, "line " + std::to_string(line_no) +
                                           ": duplicate language code '" + code +
                                           "' (first seen on line " +
                                           std::to_string(it->second) + ")");
    }
    records.push_back({std::move(code), std::string(cols[1]), population});
  }
  return LanguageRegistry(std::move(records));
}

LanguageRegistry load_language_registry(const std::filesystem::path& path) {
  return parse_language_registry(read_file(path));
}

// ---------------------------------------------------------------------------

std::string_view to_string(LanguageRole role) noexcept {
  switch (role) {
    case LanguageRole::single: return "single";
    case LanguageRole::mt_source: return "mt_source";
    case LanguageRole::mt_target: return "mt_target";
    case LanguageRole::mt_both: return "mt_both";
  }
  return "single";
}

std::string_view to_string(MaxMode mode) noexcept {
  return mode == MaxMode::fixed ? "fixed" : "empirical";
}

TaskRegistry::TaskRegistry(std::vector<TaskDef> tasks) : tasks_(std::move(tasks)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& task = tasks_[i];
    const auto& m = task.metric;
    if (task.id.empty()) throw Error(ErrorKind::domain, "task with empty id");
    if (m.name.empty()) throw Error(ErrorKind::domain, "task '" + task.id + "': empty metric name");
    if (!(m.range_min < m.range_max)) {
      throw Error(ErrorKind::domain, "task '" + task.id + "': range_min must be below range_max");
    }
    if (m.max_mode == MaxMode::fixed &&
        (m.fixed_max < m.range_min || m.fixed_max > m.range_max || m.fixed_max <= 0.0)) {
      throw Error(ErrorKind::domain,
                  "task '" + task.id + "': fixed max must be positive and inside the range");
    }
    if (!index_.emplace(task.id, i).second) {
      throw Error(ErrorKind::conflict, "duplicate task id '" + task.id + "'");
    }
  }
}

const TaskDef* TaskRegistry::find(std::string_view id) const noexcept {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &tasks_[it->second];
}

const TaskDef& TaskRegistry::resolve(std::string_view id) const {
  if (const auto* task = find(id)) return *task;
  throw NotFoundError("task", std::string(id));
}

namespace {

LanguageRole parse_role(const std::string& text, const std::string& task_id) {
  if (text == "single") return LanguageRole::single;
  if (text == "mt_source") return LanguageRole::mt_source;
  if (text == "mt_target") return LanguageRole::mt_target;
  if (text == "mt_both") return LanguageRole::mt_both;
  throw Error(ErrorKind::parse, "task '" + task_id + "': unknown language_role '" + text + "'");
}

MetricDef parse_metric(const nlohmann::json& doc, const std::string& task_id) {
  MetricDef metric;
  metric.name = doc.at("name").get<std::string>();
  metric.range_min = doc.at("range_min").get<double>();
  metric.range_max = doc.at("range_max").get<double>();
  const auto& mode = doc.at("max_mode");
  if (mode.is_string()) {
    const auto text = mode.get<std::string>();
    if (text == "empirical") {
      metric.max_mode = MaxMode::empirical;
    } else if (text == "fixed") {
      metric.max_mode = MaxMode::fixed;
      metric.fixed_max = metric.range_max;
    } else {
      throw Error(ErrorKind::parse, "task '" + task_id + "': unknown max_mode '" + text + "'");
    }
  } else if (mode.is_object() && mode.contains("fixed")) {
    metric.max_mode = MaxMode::fixed;
    metric.fixed_max = mode.at("fixed").get<double>();
  } else {
    throw Error(ErrorKind::parse, "task '" + task_id + "': max_mode must be \"empirical\", "
                                  "\"fixed\" or {\"fixed\": value}");
  }
  return metric;
}

}  // namespace

TaskRegistry parse_task_registry(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("tasks file: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::parse, "tasks file must hold a JSON array");

  std::vector<TaskDef> tasks;
  tasks.reserve(doc.size());
  for (const auto& item : doc) {
    try {
      TaskDef task;
      task.id = item.at("id").get<std::string>();
      task.category = item.value("category", std::string{});
      task.metric = parse_metric(item.at("metric"), task.id);
      task.language_role = parse_role(item.value("language_role", std::string("single")), task.id);
      tasks.push_back(std::move(task));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, std::string("tasks file: ") + e.what());
    }
  }
  return TaskRegistry(std::move(tasks));
}

TaskRegistry load_task_registry(const std::filesystem::path& path) {
  return parse_task_registry(read_file(path));
}

}  // namespace equibench
