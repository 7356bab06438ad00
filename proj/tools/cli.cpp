#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equibench/api.hpp"
#include "equibench/engine.hpp"
#include "equibench/error.hpp"
#include "equibench/views.hpp"

#ifndef EQUIBENCH_DEFAULT_DATA_DIR
#define EQUIBENCH_DEFAULT_DATA_DIR "data"
#endif

namespace equibench::cli {

using nlohmann::json;

namespace {

/// Usage-level failure raised after parsing (unknown task, bad tau, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

const char* env(const char* name) {
  const char* value = std::getenv(name);
  return value && *value ? value : nullptr;
}

OutputFormat parse_output(const std::string& text) {
  if (text == "table") return OutputFormat::table;
  if (text == "json") return OutputFormat::json;
  throw UsageError("output must be 'table' or 'json', got '" + text + "'");
}

double parse_tau(const std::string& text) {
  char* end = nullptr;
  const double tau = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !(tau >= 0.0)) {
    throw UsageError("tau must be a non-negative number, got '" + text + "'");
  }
  return tau;
}

std::string fixed(double value, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << value;
  return os.str();
}

std::string general(double value) { return json(value).dump(); }

/// Raw option values as given on the command line.
struct Flags {
  std::string config;
  std::string registry;
  std::string tasks;
  std::string log;
  std::string snapshot;
  std::string tau;
  std::string output;
};

struct Context {
  CliConfig config;
  std::ostream& out;
  std::ostream& err;
  std::unique_ptr<Engine> engine;

  Engine& open() {
    if (!engine) engine = Engine::open(config.registry_path, config.tasks_path, config.log_path);
    return *engine;
  }

  const TaskDef& task(const std::string& id) {
    const auto* task = open().tasks().find(id);
    if (!task) throw UsageError("unknown task '" + id + "'");
    return *task;
  }

  bool json_output() const { return config.output == OutputFormat::json; }
  void emit(const json& doc) { out << views::dump(doc); }
};

CliConfig resolve_config(const CLI::App& app, const Flags& flags) {
  json file = json::object();
  std::string config_path = flags.config;
  if (config_path.empty() && env("EQUIBENCH_CONFIG")) config_path = env("EQUIBENCH_CONFIG");
  if (!config_path.empty()) {
    try {
      file = json::parse(read_text(config_path));
    } catch (const json::parse_error& e) {
      throw UsageError("config file " + config_path + ": " + e.what());
    }
    if (!file.is_object()) throw UsageError("config file must hold a JSON object");
  }

  auto pick = [&](const char* option, const std::string& flag_value, const char* env_name,
                  const char* key, std::string fallback) -> std::string {
    if (app.count(option) > 0) return flag_value;
    if (const char* value = env(env_name)) return value;
    if (file.contains(key)) {
      const auto& v = file.at(key);
      return v.is_string() ? v.get<std::string>() : v.dump();
    }
    return fallback;
  };

  const std::string data_dir = EQUIBENCH_DEFAULT_DATA_DIR;
  CliConfig config;
  config.registry_path = pick("--registry", flags.registry, "EQUIBENCH_REGISTRY", "registry",
                              data_dir + "/languages.tsv");
  config.tasks_path = pick("--tasks", flags.tasks, "EQUIBENCH_TASKS", "tasks", data_dir + "/tasks.json");
  config.log_path = pick("--log", flags.log, "EQUIBENCH_LOG", "log", config.log_path);
  config.snapshot_path =
      pick("--snapshot", flags.snapshot, "EQUIBENCH_SNAPSHOT", "snapshot", config.snapshot_path);
  config.tau = parse_tau(pick("--tau", flags.tau, "EQUIBENCH_TAU", "tau", "0.4"));
  config.output = parse_output(pick("--output", flags.output, "EQUIBENCH_OUTPUT", "output", "table"));
  if (config.registry_path.empty() || config.tasks_path.empty() || config.log_path.empty() ||
      config.snapshot_path.empty()) {
    throw UsageError("paths must not be empty");
  }
  return config;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_ingest(Context& ctx, const std::vector<std::string>& files) {
  auto& engine = ctx.open();
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  json per_file = json::array();

  for (const auto& path : files) {
    std::size_t file_accepted = 0;
    std::size_t file_rejected = 0;
    json errors = json::array();
    auto reject = [&](std::size_t index, const std::vector<FieldError>& field_errors) {
      ++file_rejected;
      json list = json::array();
      for (const auto& e : field_errors) {
        list.push_back(to_json(e));
        ctx.err << path << ":" << index << ": " << e.field << ": " << e.message << "\n";
      }
      errors.push_back(json{{"index", index}, {"errors", std::move(list)}});
    };

    std::vector<ingest::BatchItem> items;
    try {
      items = ingest::parse_batch(read_text(path));
    } catch (const PayloadError& e) {
      reject(0, e.errors());
    }
    for (auto& item : items) {
      if (!item.payload) {
        reject(item.index, item.errors);
        continue;
      }
      auto outcome = engine.submit(std::move(*item.payload));
      if (outcome.accepted) {
        ++file_accepted;
      } else {
        reject(item.index, outcome.report.errors);
      }
    }
    accepted += file_accepted;
    rejected += file_rejected;
    per_file.push_back(json{{"path", path},
                            {"accepted", file_accepted},
                            {"rejected", file_rejected},
                            {"errors", std::move(errors)}});
  }

  if (ctx.json_output()) {
    ctx.emit(json{{"accepted", accepted}, {"rejected", rejected}, {"files", std::move(per_file)}});
  } else {
    for (const auto& f : per_file) {
      ctx.out << f["path"].get<std::string>() << ": accepted " << f["accepted"] << ", rejected "
              << f["rejected"] << "\n";
    }
    ctx.out << "total: accepted " << accepted << ", rejected " << rejected << "\n";
  }
  return rejected == 0 ? kOk : kRuntime;
}

void print_report_row(std::ostream& os, const TaskReport& r) {
  os << std::left << std::setw(30) << r.task_id << std::right << std::setw(11)
     << fixed(r.demographic_avg, 4) << std::setw(11) << fixed(r.linguistic_avg, 4) << std::setw(9)
     << fixed(r.gini, 4) << std::setw(9) << fixed(r.pop_coverage_pct, 2) << "%\n";
}

int cmd_report(Context& ctx, const std::string& task_id) {
  auto& engine = ctx.open();
  const auto view = engine.view();
  std::vector<TaskReport> reports;
  if (!task_id.empty()) {
    reports.push_back(engine.board().task_report(*view->state, ctx.task(task_id).id));
  } else {
    for (const auto& task : engine.tasks().tasks()) {
      reports.push_back(engine.board().task_report(*view->state, task.id));
    }
  }

  if (ctx.json_output()) {
    if (!task_id.empty()) {
      ctx.emit(views::task_report(reports.front()));
    } else {
      json all = json::array();
      for (const auto& r : reports) all.push_back(views::task_report(r));
      ctx.emit(all);
    }
    return kOk;
  }
  ctx.out << std::left << std::setw(30) << "Task" << std::right << std::setw(11) << "Demo. Avg."
          << std::setw(11) << "Ling. Avg." << std::setw(9) << "Gini" << std::setw(10) << "% Pop."
          << "\n";
  for (const auto& r : reports) print_report_row(ctx.out, r);
  return kOk;
}

int cmd_underserved(Context& ctx, const std::string& task_id, std::size_t limit) {
  auto& engine = ctx.open();
  const auto ranking = engine.board().underserved_ranking(
      *engine.view()->state, ctx.task(task_id).id, ctx.config.tau,
      limit == 0 ? std::nullopt : std::optional<std::size_t>(limit));
  if (ctx.json_output()) {
    ctx.emit(views::underserved(ranking));
    return kOk;
  }
  ctx.out << "rank  code  population     utility  score\n";
  std::size_t rank = 0;
  for (const auto& e : ranking.entries) {
    ctx.out << std::left << std::setw(6) << ++rank << std::setw(6) << e.code << std::right
            << std::setw(10) << e.population << std::setw(12) << fixed(e.utility, 4) << "  "
            << general(e.score) << "\n";
  }
  return kOk;
}

int cmd_languages(Context& ctx, const std::string& task_id) {
  auto& engine = ctx.open();
  const auto& task = ctx.task(task_id);
  const auto scores = engine.board().language_score_ranking(*engine.view()->state, task.id);
  if (ctx.json_output()) {
    ctx.emit(views::language_scores(task.id, scores));
    return kOk;
  }
  std::size_t rank = 0;
  for (const auto& s : scores) {
    ctx.out << std::left << std::setw(6) << ++rank << std::setw(6) << s.code << std::right
            << std::setw(10) << general(s.best_value) << "  " << s.system << " (" << s.dataset
            << ")\n";
  }
  return kOk;
}

int cmd_diachronic(Context& ctx, const std::string& task_id, double tau) {
  if (tau != 0.0 && tau != 1.0) throw UsageError("diachronic --tau must be 0 or 1");
  auto& engine = ctx.open();
  const auto& task = ctx.task(task_id);
  const auto view = engine.view();
  const auto series = diachronic_series(engine.board(), *view->events, task.id, tau);
  if (ctx.json_output()) {
    ctx.emit(views::diachronic(task.id, tau, series));
    return kOk;
  }
  for (const auto& p : series) {
    ctx.out << format_timestamp(p.at) << "  seq " << std::setw(6) << std::left << p.seq
            << std::right << fixed(p.value, 6) << "\n";
  }
  return kOk;
}

int cmd_contributions(Context& ctx, const std::string& task_id, const std::string& kind_text) {
  const auto kind = parse_beneficiary_kind(kind_text);
  if (!kind) throw UsageError("--kind must be 'system' or 'dataset'");
  if (std::find(kLedgerTaus.begin(), kLedgerTaus.end(), ctx.config.tau) == kLedgerTaus.end()) {
    throw UsageError("contributions are recorded for tau 0, 0.4 and 1 only");
  }
  auto& engine = ctx.open();
  const auto& task = ctx.task(task_id);
  const auto totals =
      contribution_leaderboard(*engine.view()->ledger, task.id, ctx.config.tau, *kind);
  if (ctx.json_output()) {
    ctx.emit(views::contributions(task.id, ctx.config.tau, *kind, totals));
    return kOk;
  }
  std::size_t rank = 0;
  for (const auto& t : totals) {
    ctx.out << std::left << std::setw(6) << ++rank << std::setw(32) << t.beneficiary_id
            << std::right << fixed(t.total, 6) << "  (" << t.events << " events)\n";
  }
  return kOk;
}

int cmd_whatif(Context& ctx, const std::string& task_id, const std::string& code, double utility) {
  if (!(utility >= 0.0 && utility <= 1.0)) throw UsageError("utility must lie in [0, 1]");
  auto& engine = ctx.open();
  const auto& task = ctx.task(task_id);
  if (!engine.languages().contains(code)) throw UsageError("unknown language '" + code + "'");
  const auto result =
      engine.board().what_if(*engine.view()->state, task.id, code, utility, kLedgerTaus, ctx.config.tau);
  if (ctx.json_output()) {
    ctx.emit(views::what_if(result));
    return kOk;
  }
  ctx.out << result.code << " on " << result.task_id << ": utility " << fixed(result.current_utility, 4)
          << " -> " << fixed(result.projected_utility, 4) << "\n";
  for (const auto& [tau, delta] : result.delta_m) {
    ctx.out << "  delta M(tau=" << general(tau) << ") = " << general(delta) << "\n";
  }
  ctx.out << "  under-served rank " << result.previous_rank << " -> " << result.new_rank_of_language
          << "\n  top 3 now:";
  for (const auto& c : result.displaced_top3) ctx.out << " " << c;
  ctx.out << "\n";
  return kOk;
}

int cmd_tasks(Context& ctx) {
  auto& engine = ctx.open();
  const auto view = engine.view();
  json all = json::array();
  for (const auto& task : engine.tasks().tasks()) {
    all.push_back(views::task_summary(task, view->state->task(task.id)));
  }
  if (ctx.json_output()) {
    ctx.emit(all);
    return kOk;
  }
  for (const auto& t : all) {
    ctx.out << std::left << std::setw(30) << t["id"].get<std::string>() << std::setw(20)
            << t["metric"]["name"].get<std::string>() << std::right << std::setw(8)
            << t["submission_count"] << " submissions\n";
  }
  return kOk;
}

int cmd_serve(Context& ctx, std::string host, int port, bool host_given, bool port_given) {
  if (const char* addr = env("EQUIBENCH_ADDR")) {
    auto parsed = api::parse_address(addr);
    if (!parsed) throw UsageError(std::string("EQUIBENCH_ADDR must look like host:port, got ") + addr);
    if (!host_given) host = parsed->first;
    if (!port_given) port = parsed->second;
  }
  auto& engine = ctx.open();
  api::Service service(engine);
  api::HttpServer server(service);
  const int bound = server.bind(host, port);
  ctx.err << "equibench: serving " << engine.tasks().size() << " tasks on http://" << host << ":"
          << bound << " (log " << ctx.config.log_path << ")" << std::endl;
  server.listen();
  return kOk;
}

int cmd_snapshot(Context& ctx, const std::string& action) {
  auto& engine = ctx.open();
  const auto view = engine.view();
  const auto& path = ctx.config.snapshot_path;
  if (action == "save") {
    engine.save_snapshot(path);
    const json doc{{"action", "save"}, {"path", path}, {"last_seq", view->state->last_seq}};
    if (ctx.json_output()) {
      ctx.emit(doc);
    } else {
      ctx.out << "saved snapshot at seq " << view->state->last_seq << " to " << path << "\n";
    }
    return kOk;
  }

  // load: verify the snapshot and replay the log suffix onto it.
  const auto seeded = load_snapshot(path);
  if (seeded.last_seq > engine.view()->version) {
    throw Error(ErrorKind::conflict, "snapshot is ahead of the log (seq " +
                                         std::to_string(seeded.last_seq) + ")");
  }
  const auto replayed = fold_from(seeded, *view->events, engine.tasks());
  const bool consistent = replayed == *view->state;
  const json doc{{"action", "load"},
                 {"path", path},
                 {"snapshot_seq", seeded.last_seq},
                 {"replayed_events", view->version - seeded.last_seq},
                 {"last_seq", replayed.last_seq},
                 {"consistent", consistent}};
  if (ctx.json_output()) {
    ctx.emit(doc);
  } else {
    ctx.out << "snapshot at seq " << seeded.last_seq << ", replayed "
            << (view->version - seeded.last_seq) << " events: "
            << (consistent ? "consistent with the log" : "DIVERGES from the log") << "\n";
  }
  return consistent ? kOk : kRuntime;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"equibench: utility and equity leaderboards for language technology", "equibench"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Flags flags;
  app.add_option("--config", flags.config, "JSON config file (env EQUIBENCH_CONFIG)");
  app.add_option("--registry", flags.registry, "languages.tsv path (env EQUIBENCH_REGISTRY)");
  app.add_option("--tasks", flags.tasks, "tasks.json path (env EQUIBENCH_TASKS)");
  app.add_option("--log", flags.log, "event log path (env EQUIBENCH_LOG)");
  app.add_option("--snapshot", flags.snapshot, "snapshot path (env EQUIBENCH_SNAPSHOT)");
  app.add_option("--tau", flags.tau, "demand exponent for rankings, default 0.4 (env EQUIBENCH_TAU)");
  app.add_option("--output", flags.output, "table or json (env EQUIBENCH_OUTPUT)");

  std::vector<std::string> ingest_files;
  auto* ingest = app.add_subcommand("ingest", "Validate and append dataset/submission files");
  ingest->add_option("files", ingest_files, "JSON array or JSONL files")->required();

  std::string task_arg;
  auto* report = app.add_subcommand("report", "Global averages, Gini and coverage per task");
  report->add_option("task", task_arg, "task id (all tasks when omitted)");

  std::size_t limit = 10;
  auto* underserved = app.add_subcommand("underserved", "Rank the most under-served languages");
  underserved->add_option("task", task_arg, "task id")->required();
  underserved->add_option("--limit", limit, "number of languages (0 = all)")->capture_default_str();

  auto* languages = app.add_subcommand("languages", "Best score per covered language");
  languages->add_option("task", task_arg, "task id")->required();

  double series_tau = 1.0;
  auto* diachronic = app.add_subcommand("diachronic", "Global average after each event");
  diachronic->add_option("task", task_arg, "task id")->required();
  diachronic->add_option("--tau", series_tau, "0 (linguistic) or 1 (demographic)")->capture_default_str();

  std::string kind = "system";
  auto* contributions = app.add_subcommand("contributions", "Credit totals per system or dataset");
  contributions->add_option("task", task_arg, "task id")->required();
  contributions->add_option("--kind", kind, "system or dataset")->capture_default_str();

  std::string whatif_lang;
  double whatif_utility = 0.0;
  auto* whatif = app.add_subcommand("whatif", "Project the effect of a hypothetical utility");
  whatif->add_option("task", task_arg, "task id")->required();
  whatif->add_option("language", whatif_lang, "ISO 639-3 code")->required();
  whatif->add_option("utility", whatif_utility, "hypothetical utility in [0, 1]")->required();

  auto* tasks = app.add_subcommand("tasks", "List registered tasks");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  auto* host_opt = serve->add_option("--host", host, "listen address")->capture_default_str();
  auto* port_opt = serve->add_option("--port", port, "listen port (0 = any)")->capture_default_str();

  std::string snapshot_action;
  auto* snapshot = app.add_subcommand("snapshot", "Save the folded state or verify a saved one");
  snapshot->add_option("action", snapshot_action, "save or load")
      ->required()
      ->check(CLI::IsMember({"save", "load"}));

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Context ctx{resolve_config(app, flags), out, err, nullptr};
    if (*ingest) return cmd_ingest(ctx, ingest_files);
    if (*report) return cmd_report(ctx, task_arg);
    if (*underserved) return cmd_underserved(ctx, task_arg, limit);
    if (*languages) return cmd_languages(ctx, task_arg);
    if (*diachronic) return cmd_diachronic(ctx, task_arg, series_tau);
    if (*contributions) return cmd_contributions(ctx, task_arg, kind);
    if (*whatif) return cmd_whatif(ctx, task_arg, whatif_lang, whatif_utility);
    if (*tasks) return cmd_tasks(ctx);
    if (*serve) return cmd_serve(ctx, host, port, host_opt->count() > 0, port_opt->count() > 0);
    if (*snapshot) return cmd_snapshot(ctx, snapshot_action);
  } catch (const UsageError& e) {
    err << "equibench: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "equibench: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace equibench::cli
