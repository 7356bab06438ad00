#include "equibench/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "equibench/codec.hpp"
#include "equibench/error.hpp"

namespace equibench {

using nlohmann::json;

void apply_to_task(TaskState& slice, const Event& event, const TaskDef& task) {
  if (const auto* reg = std::get_if<DatasetReg>(&event.payload)) {
    slice.datasets.insert(reg->dataset_id);
    return;
  }
  const auto& rec = std::get<PerformanceRecord>(event.payload);
  ++slice.submission_count;
  if (!slice.empirical_max || rec.value > *slice.empirical_max) slice.empirical_max = rec.value;

  for (auto& code : stat_languages(rec.language, task.language_role)) {
    auto it = slice.best.find(code);
    if (it == slice.best.end()) {
      slice.best.emplace(std::move(code), BestEntry{rec, event.seq});
      continue;
    }
    auto& best = it->second;
    if (rec.value > best.record.value || (rec.value == best.record.value && event.seq < best.seq)) {
      best = BestEntry{rec, event.seq};
    }
  }
}

void apply_event(BenchState& state, const Event& event, const TaskRegistry& tasks) {
  const auto& task = tasks.resolve(task_of(event.payload));
  auto& slice = state.tasks[task.id];
  apply_to_task(slice, event, task);
  if (const auto* reg = std::get_if<DatasetReg>(&event.payload)) {
    state.datasets.insert_or_assign(reg->dataset_id, *reg);
  } else {
    state.submission_ids.insert(std::get<PerformanceRecord>(event.payload).submission_id);
  }
  state.last_seq = std::max(state.last_seq, event.seq);
  ++state.event_count;
}

BenchState fold_state(std::span<const Event> events, const TaskRegistry& tasks,
                      std::uint64_t upto) {
  BenchState state;
  for (const auto& event : events) {
    if (event.seq <= upto) apply_event(state, event, tasks);
  }
  return state;
}

BenchState fold_state_until(std::span<const Event> events, const TaskRegistry& tasks,
                            Timestamp upto) {
  std::vector<const Event*> picked;
  for (const auto& event : events) {
    if (event.at <= upto) picked.push_back(&event);
  }
  std::sort(picked.begin(), picked.end(),
            [](const Event* a, const Event* b) { return chronological_less(*a, *b); });
  BenchState state;
  for (const auto* event : picked) apply_event(state, *event, tasks);
  return state;
}

BenchState fold_from(BenchState state, std::span<const Event> events, const TaskRegistry& tasks) {
  const auto start = state.last_seq;
  for (const auto& event : events) {
    if (event.seq > start) apply_event(state, event, tasks);
  }
  return state;
}

// ---------------------------------------------------------------------------
// Event log

std::string encode_log_line(const Event& event) { return to_json(event).dump(); }

EventLog EventLog::open(const std::filesystem::path& path) {
  EventLog log;
  log.path_ = path;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (std::filesystem::exists(path)) throw Error(ErrorKind::io, "cannot read " + path.string());
    return log;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Event event;
    try {
      event = event_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed event: ") + e.what());
    } catch (const PayloadError& e) {
      throw ParseError(line_no, e.what());
    }
    if (event.seq != log.last_seq() + 1) {
      throw ParseError(line_no, "expected seq " + std::to_string(log.last_seq() + 1) + ", found " +
                                    std::to_string(event.seq));
    }
    log.events_.push_back(std::move(event));
  }
  return log;
}

const Event& EventLog::append(EventPayload payload) {
  Event event;
  event.seq = last_seq() + 1;
  event.kind = kind_of(payload);
  event.at = timestamp_of(payload);
  event.payload = std::move(payload);

  if (path_) {
    const std::string line = encode_log_line(event) + "\n";
    std::error_code ec;
    const auto before = std::filesystem::exists(*path_, ec) ? std::filesystem::file_size(*path_, ec) : 0;
    std::FILE* f = std::fopen(path_->c_str(), "ab");
    if (!f) throw Error(ErrorKind::io, "cannot open " + path_->string() + " for append");
    const bool written = std::fwrite(line.data(), 1, line.size(), f) == line.size();
    const bool flushed = std::fflush(f) == 0;
    std::fclose(f);
    if (!written || !flushed) {
      std::filesystem::resize_file(*path_, before, ec);
      throw Error(ErrorKind::io, "short write to " + path_->string());
    }
  }
  events_.push_back(std::move(event));
  return events_.back();
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

constexpr std::string_view kSnapshotFormat = "equibench-snapshot";
constexpr int kSnapshotVersion = 1;

std::string crc_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

}  // namespace

std::string encode_snapshot(const BenchState& state) {
  const std::string body = state_to_json(state).dump();
  // The state is embedded as a string so the checksum covers exact bytes.
  json envelope{{"format", kSnapshotFormat},
                {"version", kSnapshotVersion},
                {"crc32", crc_hex(body)},
                {"state", body}};
  return envelope.dump() + "\n";
}

BenchState decode_snapshot(std::string_view text) {
  json envelope;
  try {
    envelope = json::parse(text);
  } catch (const json::parse_error&) {
    throw Error(ErrorKind::checksum, "snapshot is truncated or not valid JSON");
  }
  try {
    if (envelope.at("format").get<std::string>() != kSnapshotFormat ||
        envelope.at("version").get<int>() != kSnapshotVersion) {
      throw Error(ErrorKind::checksum, "unsupported snapshot format");
    }
    const auto& body = envelope.at("state").get_ref<const std::string&>();
    if (crc_hex(body) != envelope.at("crc32").get<std::string>()) {
      throw Error(ErrorKind::checksum, "snapshot checksum mismatch");
    }
    return state_from_json(json::parse(body));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::checksum, std::string("snapshot is corrupt: ") + e.what());
  } catch (const PayloadError& e) {
    throw Error(ErrorKind::checksum, std::string("snapshot is corrupt: ") + e.what());
  }
}

void save_snapshot(const BenchState& state, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out << encode_snapshot(state);
    if (!out.flush()) throw Error(ErrorKind::io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot replace " + path.string() + ": " + ec.message());
}

BenchState load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_snapshot(buf.str());
}

}  // namespace equibench
