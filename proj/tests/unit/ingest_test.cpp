#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "equibench/codec.hpp"
#include "equibench/ingest.hpp"
#include "equibench/store.hpp"

namespace equibench {
namespace {

using test::dataset;
using test::fixed_task;
using test::score;

constexpr const char* kSubmission = R"({"submission_id":"s1","task":"ner","dataset":"d",
  "language":"yor","metric":"F1","value":61.5,"system":"afro-xlmr",
  "submitted_at":"2022-03-01T12:00:00Z","contributor":"lab"})";

constexpr const char* kSubmissionLine =
    R"({"submission_id":"s1","task":"ner","dataset":"d","language":"eng","metric":"F1",)"
    R"("value":50,"system":"A","submitted_at":"2022-01-02T00:00:00Z"})";

std::vector<std::string> codes_of(const std::vector<FieldError>& errors) {
  std::vector<std::string> out;
  for (const auto& e : errors) out.push_back(e.code);
  return out;
}

bool has_error(const std::vector<FieldError>& errors, const std::string& field,
               const std::string& code) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const FieldError& e) { return e.field == field && e.code == code; });
}

TEST(ParseSubmission, ReadsEveryField) {
  auto rec = ingest::parse_submission(kSubmission);
  EXPECT_EQ(rec.submission_id, "s1");
  EXPECT_EQ(rec.task_id, "ner");
  EXPECT_EQ(std::get<std::string>(rec.language), "yor");
  EXPECT_EQ(rec.value, 61.5);
  EXPECT_EQ(rec.contributor.value(), "lab");
  EXPECT_EQ(format_timestamp(rec.submitted_at), "2022-03-01T12:00:00Z");
}

TEST(ParseSubmission, CollectsEveryFieldError) {
  try {
    ingest::parse_submission(R"({"submission_id":"","task":"ner","language":"yo",
      "metric":"F1","value":"high","system":"x","submitted_at":"yesterday"})");
    FAIL();
  } catch (const PayloadError& e) {
    const auto& errs = e.errors();
    EXPECT_TRUE(has_error(errs, ".submission_id", "empty"));
    EXPECT_TRUE(has_error(errs, ".dataset", "missing"));
    EXPECT_TRUE(has_error(errs, ".language", "code_format"));
    EXPECT_TRUE(has_error(errs, ".value", "type"));
    EXPECT_TRUE(has_error(errs, ".submitted_at", "timestamp"));
  }
}

TEST(ParseSubmission, TwoLetterCodeGetsASuggestion) {
  try {
    ingest::parse_submission(R"({"submission_id":"s","task":"ner","dataset":"d","language":"zh",
      "metric":"F1","value":1,"system":"x","submitted_at":"2022-01-01T00:00:00Z"})");
    FAIL();
  } catch (const PayloadError& e) {
    ASSERT_EQ(e.errors().size(), 1u);
    EXPECT_NE(e.errors()[0].message.find("cmn"), std::string::npos) << e.errors()[0].message;
  }
  EXPECT_EQ(ingest::suggest_iso639_3("en"), "eng");
  EXPECT_EQ(ingest::suggest_iso639_3("yo"), "yor");
  EXPECT_EQ(ingest::suggest_iso639_3("qq"), "");
}

TEST(ParseSubmission, MalformedJsonIsReportedAtRoot) {
  try {
    ingest::parse_submission("{\"submission_id\": ");
    FAIL();
  } catch (const PayloadError& e) {
    ASSERT_EQ(e.errors().size(), 1u);
    EXPECT_EQ(e.errors()[0].field, "$");
  }
}

TEST(ParseDataset, TranslationDatasetsUsePairs) {
  auto reg = ingest::parse_dataset(R"({"dataset_id":"flores","task":"mt",
    "language_pairs":[["eng","yor"],["yor","eng"]],"name":"FLORES",
    "registered_at":"2022-01-01T00:00:00Z"})");
  EXPECT_EQ(reg.languages.size(), 2u);
  EXPECT_TRUE(reg.languages.count(LanguageRef{LanguagePair{"yor", "eng"}}));
  EXPECT_THROW(ingest::parse_dataset(R"({"dataset_id":"x","task":"mt","languages":["eng"],
    "language_pairs":[["eng","yor"]],"name":"x","registered_at":"2022-01-01T00:00:00Z"})"),
               PayloadError);
}

TEST(ParseBatch, AcceptsArraysAndJsonLines) {
  const std::string line = R"({"dataset_id":"d","task":"ner","languages":["eng"],"name":"D",)"
                           R"("registered_at":"2022-01-01T00:00:00Z"})";
  auto jsonl = ingest::parse_batch(line + "\n\n" + kSubmissionLine + "\nnot json\n");
  ASSERT_EQ(jsonl.size(), 3u);
  EXPECT_TRUE(jsonl[0].payload.has_value());
  EXPECT_EQ(jsonl[0].index, 1u);
  EXPECT_TRUE(jsonl[1].payload.has_value());
  EXPECT_EQ(jsonl[1].index, 3u);
  EXPECT_FALSE(jsonl[2].payload.has_value());
  EXPECT_EQ(jsonl[2].index, 4u);

  auto array = ingest::parse_batch("[" + line + ", {\"nothing\": 1}]");
  ASSERT_EQ(array.size(), 2u);
  EXPECT_TRUE(array[0].payload.has_value());
  EXPECT_FALSE(array[1].errors.empty());
}

class Validate : public ::testing::Test {
 protected:
  LanguageRegistry languages = test::make_languages({{"eng", 100}, {"yor", 50}, {"fra", 70}});
  TaskRegistry tasks{{fixed_task("ner"), fixed_task("kg", 1.0, LanguageRole::single, "Hits"),
                      test::empirical_task("mt", LanguageRole::mt_source)}};
  BenchState state = fold_state(test::as_events({dataset("d", "ner", {"eng", "yor"}),
                                                 score("s1", "ner", "d", "eng", 50, "A")}),
                                tasks);

  ingest::ValidationReport check(EventPayload p) {
    return ingest::validate_event(p, languages, tasks, state);
  }
};

TEST_F(Validate, AcceptsAWellFormedSubmission) {
  auto r = check(score("s2", "ner", "d", "yor", 40, "B"));
  EXPECT_TRUE(r.ok) << ::testing::PrintToString(codes_of(r.errors));
}

TEST_F(Validate, RejectsDuplicatesAndUnknownReferences) {
  EXPECT_TRUE(has_error(check(score("s1", "ner", "d", "yor", 40, "B")).errors,
                        ".submission_id", "duplicate"));
  EXPECT_TRUE(has_error(check(score("s2", "pos", "d", "yor", 40, "B")).errors, ".task",
                        "unknown_task"));
  EXPECT_TRUE(has_error(check(score("s2", "ner", "zz", "yor", 40, "B")).errors, ".dataset",
                        "unknown_dataset"));
  EXPECT_TRUE(has_error(check(score("s2", "ner", "d", "fra", 40, "B")).errors, ".language",
                        "not_in_dataset"));
  EXPECT_TRUE(has_error(check(score("s2", "ner", "d", "xyz", 40, "B")).errors, ".language",
                        "unknown_language"));
  EXPECT_TRUE(has_error(check(dataset("d", "ner", {"fra"})).errors, ".dataset_id", "duplicate"));
  const auto unknown = codes_of(check(dataset("d2", "ner", {"qqq"})).errors);
  EXPECT_NE(std::find(unknown.begin(), unknown.end(), "unknown_language"), unknown.end());
}

TEST_F(Validate, RejectsMetricAndRangeViolations) {
  EXPECT_TRUE(has_error(check(score("s2", "ner", "d", "yor", 40, "B", 1, "Accuracy")).errors,
                        ".metric", "metric_mismatch"));
  EXPECT_TRUE(has_error(check(score("s2", "ner", "d", "yor", 140, "B")).errors, ".value", "range"));
  EXPECT_TRUE(has_error(check(score("s2", "ner", "d", "yor", -1, "B")).errors, ".value", "range"));
}

TEST_F(Validate, TranslationTasksNeedPairs) {
  EXPECT_FALSE(check(dataset("m", "mt", {"eng"})).ok);
  EXPECT_FALSE(check(test::pair_dataset("m", "ner", {{"eng", "yor"}})).ok);
  EXPECT_TRUE(check(test::pair_dataset("m", "mt", {{"eng", "yor"}})).ok);
}

TEST_F(Validate, SubmissionBeforeItsDatasetIsOnlyAWarning) {
  auto early = score("s2", "ner", "d", "yor", 40, "B", -5);
  auto r = check(early);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.warnings.size(), 1u);
}

}  // namespace
}  // namespace equibench
