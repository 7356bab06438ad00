#include <gtest/gtest.h>

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "cli.hpp"
#include "equibench/api.hpp"
#include "paths.hpp"

namespace equibench {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "equibench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kEnvVars[] = {"EQUIBENCH_CONFIG", "EQUIBENCH_REGISTRY", "EQUIBENCH_TASKS",
                          "EQUIBENCH_LOG",    "EQUIBENCH_SNAPSHOT", "EQUIBENCH_TAU",
                          "EQUIBENCH_OUTPUT", "EQUIBENCH_ADDR"};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    shared_ = new test::TempDir();
    for (const char* name : kEnvVars) ::unsetenv(name);
    const auto corpus = test::fixture_dir() / "corpus";
    auto r = run({"--log", (*shared_ / "corpus.jsonl").string(), "ingest",
                  (corpus / "datasets.jsonl").string(), (corpus / "submissions.jsonl").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete shared_;
    shared_ = nullptr;
  }
  void SetUp() override {
    for (const char* name : kEnvVars) ::unsetenv(name);
  }
  void TearDown() override {
    for (const char* name : kEnvVars) ::unsetenv(name);
  }

  static std::string corpus_log() { return (*shared_ / "corpus.jsonl").string(); }
  Result on_corpus(std::vector<std::string> args) {
    args.insert(args.begin(), {"--log", corpus_log()});
    return run(std::move(args));
  }

  static test::TempDir* shared_;
  test::TempDir dir;
};

test::TempDir* CliTest::shared_ = nullptr;

std::vector<std::string> entry_codes(const json& doc) {
  std::vector<std::string> out;
  for (const auto& e : doc["entries"]) out.push_back(e["code"]);
  return out;
}

TEST_F(CliTest, UnderservedOnTheTableFourCorpus) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> rows = {
      {"ner", {"cmn", "pnb", "wuu"}},
      {"qa_extractive", {"por", "jpn", "urd"}},
      {"text_pair_classification", {"ben", "por", "ind"}},
      {"machine_translation", {"cmn", "spa", "ara"}},
      {"text_classification", {"cmn", "spa", "ara"}},
      {"kg_link_tail_prediction", {"cmn", "spa", "ara"}},
  };
  for (const auto& [task, want] : rows) {
    auto r = on_corpus({"--output", "json", "underserved", task, "--limit", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(entry_codes(json::parse(r.out)), want) << task;
  }
  auto table = on_corpus({"underserved", "ner", "--limit", "3"});
  EXPECT_NE(table.out.find("cmn"), std::string::npos);
}

TEST_F(CliTest, WhatIfPerfectUtilitySinksBelowEveryPositiveScore) {
  auto all = json::parse(on_corpus({"--output", "json", "underserved", "ner", "--limit", "0"}).out);
  std::size_t positive = 0;
  for (const auto& e : all["entries"]) {
    if (e["code"] != "wuu" && e["score"].get<double>() > 0.0) ++positive;
  }
  auto r = on_corpus({"--output", "json", "whatif", "ner", "wuu", "1.0"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["previous_rank"], 3);
  EXPECT_EQ(doc["new_rank_of_language"], positive + 1);
}

TEST_F(CliTest, DiachronicEndsAtTheReportedAverage) {
  auto series = json::parse(on_corpus({"--output", "json", "diachronic", "ner", "--tau", "1"}).out);
  auto report = json::parse(on_corpus({"--output", "json", "report", "ner"}).out);
  ASSERT_FALSE(series["points"].empty());
  const double last = series["points"].back()["value"];
  EXPECT_NEAR(last, report["demographic_avg"].get<double>(), 5e-5);
  EXPECT_EQ(on_corpus({"diachronic", "ner", "--tau", "0.4"}).code, cli::kUsage);
}

TEST_F(CliTest, JsonOutputEqualsTheApiBody) {
  auto engine = Engine::open(test::data_dir() / "languages.tsv", test::data_dir() / "tasks.json",
                             corpus_log());
  api::Service service(*engine);
  auto api_get = [&](const std::string& path, std::map<std::string, std::string> params = {}) {
    return service.handle({"GET", path, std::move(params), "", std::nullopt}).body;
  };
  EXPECT_EQ(on_corpus({"--output", "json", "report", "ner"}).out, api_get("/tasks/ner/report"));
  EXPECT_EQ(on_corpus({"--output", "json", "tasks"}).out, api_get("/tasks"));
  EXPECT_EQ(on_corpus({"--output", "json", "underserved", "qa_extractive"}).out,
            api_get("/tasks/qa_extractive/underserved"));
  EXPECT_EQ(on_corpus({"--output", "json", "languages", "ner"}).out, api_get("/tasks/ner/languages"));
  EXPECT_EQ(on_corpus({"--output", "json", "diachronic", "ner"}).out,
            api_get("/tasks/ner/diachronic"));
  EXPECT_EQ(on_corpus({"--output", "json", "--tau", "1", "contributions", "ner", "--kind", "dataset"}).out,
            api_get("/tasks/ner/contributions", {{"tau", "1"}, {"kind", "dataset"}}));
  EXPECT_EQ(on_corpus({"--output", "json", "whatif", "ner", "pnb", "0.5"}).out,
            api_get("/whatif", {{"task", "ner"}, {"language", "pnb"}, {"utility", "0.5"}}));
}

TEST_F(CliTest, JsonOutputIsExactlyOneDocument) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"report"}, {"tasks"}, {"underserved", "ner"}}) {
    args.insert(args.begin(), {"--output", "json"});
    auto r = on_corpus(args);
    ASSERT_EQ(r.code, 0);
    ASSERT_FALSE(r.out.empty());
    EXPECT_EQ(r.out.back(), '\n');
    EXPECT_EQ(r.out.find('\n'), r.out.size() - 1);
    EXPECT_TRUE(json::accept(r.out));
    EXPECT_TRUE(r.err.empty());
  }
}

TEST_F(CliTest, TableReportPrintsFourDecimals) {
  auto r = on_corpus({"report", "ner"});
  ASSERT_EQ(r.code, 0);
  auto report = json::parse(on_corpus({"--output", "json", "report", "ner"}).out);
  std::ostringstream want;
  want << std::fixed << std::setprecision(4) << report["demographic_avg"].get<double>();
  EXPECT_NE(r.out.find(want.str()), std::string::npos) << r.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(on_corpus({"report", "no_such_task"}).code, cli::kUsage);
  EXPECT_NE(on_corpus({"report", "no_such_task"}).err.find("no_such_task"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"--output", "xml", "--log", (dir / "l.jsonl").string(), "tasks"}).code,
            cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
  EXPECT_EQ(run({"--registry", (dir / "missing.tsv").string(), "tasks"}).code, cli::kRuntime);
}

TEST_F(CliTest, ReingestIsRejectedAndLeavesTheLogUnchanged) {
  const auto before = test::read_file(corpus_log());
  auto r = on_corpus({"--output", "json", "ingest",
                      (test::fixture_dir() / "corpus" / "datasets.jsonl").string()});
  EXPECT_EQ(r.code, cli::kRuntime);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["accepted"], 0);
  EXPECT_GT(doc["rejected"].get<int>(), 0);
  EXPECT_EQ(doc["files"][0]["errors"][0]["errors"][0]["code"], "duplicate");
  EXPECT_EQ(test::read_file(corpus_log()), before);
}

TEST_F(CliTest, MixedBatchExitsNonZeroButKeepsTheGoodItems) {
  const auto fig = test::fixture_dir() / "figure2";
  test::write_file(dir / "batch.jsonl",
                   R"({"dataset_id":"D","task":"ner","languages":["qaa"],"name":"D",)"
                   R"("registered_at":"2022-01-01T00:00:00Z"})"
                   "\n"
                   R"({"dataset_id":"E","task":"ner","languages":["xx"],"name":"E",)"
                   R"("registered_at":"2022-01-01T00:00:00Z"})"
                   "\n");
  auto r = run({"--registry", (fig / "languages.tsv").string(), "--tasks",
                (fig / "tasks.json").string(), "--log", (dir / "log.jsonl").string(), "ingest",
                (dir / "batch.jsonl").string()});
  EXPECT_EQ(r.code, cli::kRuntime);
  EXPECT_NE(r.err.find("batch.jsonl:2"), std::string::npos) << r.err;
  EXPECT_NE(r.out.find("accepted 1, rejected 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, FlagBeatsEnvBeatsConfigFile) {
  test::write_file(dir / "cfg.json",
                   json{{"log", corpus_log()}, {"output", "json"}, {"tau", 0}}.dump());
  auto from_file = run({"--config", (dir / "cfg.json").string(), "underserved", "ner"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(json::parse(from_file.out)["tau"], 0.0);

  ::setenv("EQUIBENCH_CONFIG", (dir / "cfg.json").string().c_str(), 1);
  ::setenv("EQUIBENCH_TAU", "1", 1);
  auto from_env = run({"underserved", "ner"});
  ASSERT_EQ(from_env.code, 0) << from_env.err;
  EXPECT_EQ(json::parse(from_env.out)["tau"], 1.0);

  auto from_flag = run({"--tau", "0.4", "underserved", "ner"});
  EXPECT_EQ(json::parse(from_flag.out)["tau"], 0.4);

  ::setenv("EQUIBENCH_OUTPUT", "table", 1);
  EXPECT_NE(run({"underserved", "ner"}).out.find("rank"), std::string::npos);

  test::write_file(dir / "bad.json", "[1, 2]");
  EXPECT_EQ(run({"--config", (dir / "bad.json").string(), "tasks"}).code, cli::kUsage);
}

TEST_F(CliTest, SnapshotSaveThenLoadIsConsistent) {
  const auto log = dir / "log.jsonl";
  const auto fig = test::fixture_dir() / "figure2";
  std::vector<std::string> base{"--registry", (fig / "languages.tsv").string(),
                                "--tasks",    (fig / "tasks.json").string(),
                                "--log",      log.string(),
                                "--snapshot", (dir / "snap.json").string()};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const auto events = test::read_file(fig / "events.jsonl");
  const auto cut = events.find("Dataset_3") ;
  const auto split = events.rfind('\n', cut) + 1;
  test::write_file(dir / "first.jsonl", events.substr(0, split));
  test::write_file(dir / "rest.jsonl", events.substr(split));

  ASSERT_EQ(with({"ingest", (dir / "first.jsonl").string()}).code, 0);
  ASSERT_EQ(with({"snapshot", "save"}).code, 0);
  ASSERT_EQ(with({"ingest", (dir / "rest.jsonl").string()}).code, 0);
  auto loaded = with({"--output", "json", "snapshot", "load"});
  ASSERT_EQ(loaded.code, 0) << loaded.err;
  auto doc = json::parse(loaded.out);
  EXPECT_TRUE(doc["consistent"].get<bool>());
  EXPECT_EQ(doc["snapshot_seq"], 11);
  EXPECT_EQ(doc["replayed_events"], 2);

  auto text = test::read_file(dir / "snap.json");
  text[text.find("System_1") + 2] = 'X';
  test::write_file(dir / "snap.json", text);
  EXPECT_EQ(with({"snapshot", "load"}).code, cli::kRuntime);
  EXPECT_EQ(with({"snapshot", "restore"}).code, cli::kUsage);
}

}  // namespace
}  // namespace equibench
