#pragma once

#include <iosfwd>
#include <string>

namespace equibench::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2 };

enum class OutputFormat { table, json };

/// Resolved settings: flag > environment > config file > built-in default.
struct CliConfig {
  std::string registry_path;
  std::string tasks_path;
  std::string log_path = "events.jsonl";
  std::string snapshot_path = "snapshot.json";
  double tau = 0.4;
  OutputFormat output = OutputFormat::table;
};

/// Runs one command line. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace equibench::cli
