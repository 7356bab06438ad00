#include <gtest/gtest.h>

#include "equibench/error.hpp"
#include "equibench/registry.hpp"
#include "paths.hpp"

namespace equibench {
namespace {

TEST(LanguageRegistry, ResolvesCaseInsensitively) {
  auto reg = parse_language_registry("eng\tEnglish\t372900000\nyor\tYoruba\t45600000\n");
  EXPECT_EQ(reg.resolve("ENG").name, "English");
  EXPECT_EQ(reg.resolve("yor").population, 45600000u);
  EXPECT_EQ(reg.total_population(), 372900000u + 45600000u);
}

TEST(LanguageRegistry, UnknownCodeThrowsNotFoundCarryingTheCode) {
  auto reg = parse_language_registry("eng\tEnglish\t1\n");
  try {
    reg.resolve("xyz");
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_EQ(e.key(), "xyz");
    EXPECT_EQ(e.kind(), ErrorKind::not_found);
  }
}

TEST(LanguageRegistry, DuplicateCodeIsAConflictNamingBothLines) {
  try {
    parse_language_registry("eng\tEnglish\t1\nfra\tFrench\t2\neng\tEnglish again\t3\n");
    FAIL() << "expected conflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::conflict);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
  }
}

TEST(LanguageRegistry, MalformedRowsAreParseErrors) {
  EXPECT_THROW(parse_language_registry("en\tEnglish\t1\n"), ParseError);
  EXPECT_THROW(parse_language_registry("eng\tEnglish\n"), ParseError);
  EXPECT_THROW(parse_language_registry("eng\tEnglish\t-4\n"), ParseError);
  EXPECT_THROW(parse_language_registry("eng\tEnglish\tmany\n"), ParseError);
}

TEST(LanguageRegistry, Iso639Shape) {
  EXPECT_TRUE(is_iso639_3("cmn"));
  EXPECT_FALSE(is_iso639_3("zh"));
  EXPECT_FALSE(is_iso639_3("CMN"));
  EXPECT_FALSE(is_iso639_3("cm1"));
  EXPECT_FALSE(is_iso639_3("cmnn"));
}

TEST(LanguageRegistry, ShippedRegistryHas6671Languages) {
  auto reg = load_language_registry(test::data_dir() / "languages.tsv");
  EXPECT_EQ(reg.size(), 6671u);
  EXPECT_GT(reg.resolve("cmn").population, reg.resolve("spa").population);
  EXPECT_FALSE(reg.contains("zho"));
}

TEST(TaskRegistry, ShippedTasksLoad) {
  auto tasks = load_task_registry(test::data_dir() / "tasks.json");
  EXPECT_EQ(tasks.size(), 17u);
  const auto& mt = tasks.resolve("machine_translation");
  EXPECT_EQ(mt.language_role, LanguageRole::mt_source);
  EXPECT_EQ(mt.metric.max_mode, MaxMode::empirical);
  const auto& ner = tasks.resolve("ner");
  EXPECT_EQ(ner.metric.max_mode, MaxMode::fixed);
  EXPECT_DOUBLE_EQ(ner.metric.fixed_max, 100.0);
  EXPECT_THROW(tasks.resolve("pos_tagging"), NotFoundError);
}

TEST(TaskRegistry, RejectsInconsistentMetrics) {
  EXPECT_THROW(parse_task_registry(R"([{"id":"t","category":"c","metric":{"name":"F1",
      "range_min":0,"range_max":100,"max_mode":{"fixed":0}},"language_role":"single"}])"),
               Error);
  EXPECT_THROW(parse_task_registry(R"([{"id":"t","category":"c","metric":{"name":"F1",
      "range_min":100,"range_max":0,"max_mode":"empirical"},"language_role":"single"}])"),
               Error);
  EXPECT_THROW(parse_task_registry(R"([{"id":"t","category":"c","metric":{"name":"F1",
      "range_min":0,"range_max":100,"max_mode":{"fixed":200}},"language_role":"single"}])"),
               Error);
  EXPECT_THROW(parse_task_registry(R"([{"id":"t","category":"c","metric":{"name":"F1",
      "range_min":0,"range_max":100,"max_mode":"empirical"},"language_role":"both"}])"),
               Error);
}

}  // namespace
}  // namespace equibench
