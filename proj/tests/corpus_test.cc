#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ami/corpus.h"
#include "ami/errors.h"
#include "test_support.h"

namespace ami {
namespace {

using testing::data_path;
using testing::TempDir;
using testing::write_text;

const char kHeader[] = "id\ttext\tmisogynous\tmisogyny_category\ttarget\n";

Dataset parse(const std::string& body, LoadOptions opts = {},
              std::vector<LoadIssue>* issues = nullptr) {
  return parse_dataset(std::string(kHeader) + body, opts, issues);
}

TEST(Corpus, ParsesLabelledRows) {
  Dataset d = parse("1\thello there\t1\tdiscredit\tactive\n2\tok\t0\t0\t0\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(d.has_labels);
  EXPECT_EQ(d.tweets[0].category, Category::kDiscredit);
  EXPECT_EQ(d.tweets[0].target, Target::kActive);
  EXPECT_EQ(d.tweets[1].misogynous, 0);
}

TEST(Corpus, SingleUnlabelledRow) {
  Dataset d = parse_dataset("id\ttext\n42\thello world\n", {.labeled = false});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_FALSE(d.has_labels);
  EXPECT_EQ(d.tweets[0].id, "42");
  EXPECT_EQ(d.tweets[0].text, "hello world");
}

TEST(Corpus, InconsistentRowStrictNamesLine) {
  try {
    parse("1\tfine\t1\tdiscredit\tactive\n2\tbad\t0\tdiscredit\t0\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(Corpus, InconsistentRowLenientKeptWithWarning) {
  std::vector<LoadIssue> issues;
  Dataset d = parse("1\tfine\t1\tdiscredit\tactive\n2\tbad\t0\tdiscredit\t0\n",
                    {.labeled = true, .strict = false}, &issues);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.tweets[1].category, Category::kDiscredit);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].line, 3u);
  EXPECT_FALSE(issues[0].row_skipped);
}

TEST(Corpus, MalformedRowsLenientSkipped) {
  std::vector<LoadIssue> issues;
  Dataset d = parse("1\tfine\t1\tdiscredit\tactive\n2\tshort\t0\n3\tx\t2\t0\t0\n"
                    "4\ty\t1\tbogus\tactive\n1\tdup\t0\t0\t0\n5\tok\t0\t0\t0\n",
                    {.labeled = true, .strict = false}, &issues);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(issues.size(), 4u);
  for (const auto& i : issues) EXPECT_TRUE(i.row_skipped);
}

TEST(Corpus, StrictRejectsBadHeaderAndEmpty) {
  EXPECT_THROW(parse_dataset("id\ttext\tlabel\n1\tx\t0\n", {}), DataError);
  EXPECT_THROW(parse(""), DataError);
  EXPECT_THROW(load_dataset("/nonexistent/file.tsv"), DataError);
}

TEST(Corpus, DistributionOfTwoTweetFixture) {
  Dataset d = parse("1\ta\t1\tdiscredit\tactive\n2\tb\t0\t0\t0\n");
  const LabelCounts c = label_distribution(d);
  EXPECT_EQ(c.misogynous, 1u);
  EXPECT_EQ(c.not_misogynous, 1u);
  EXPECT_EQ(c.count(Category::kDiscredit), 1u);
  EXPECT_EQ(c.count(Target::kActive), 1u);
  EXPECT_EQ(c.count(Target::kPassive), 0u);
}

TEST(Corpus, DistributionWithoutMisogyny) {
  Dataset d = parse("1\ta\t0\t0\t0\n2\tb\t0\t0\t0\n");
  const LabelCounts c = label_distribution(d);
  for (Category cat : kCategories) EXPECT_EQ(c.count(cat), 0u);
  EXPECT_THROW(label_distribution(Dataset{{}, false}), DataError);
}

TEST(Corpus, SyntheticTableOneCounts) {
  const Dataset d = load_dataset(data_path("table1_train.tsv")).dataset;
  const LabelCounts c = label_distribution(d);
  EXPECT_EQ(c.misogynous, 1785u);
  EXPECT_EQ(c.not_misogynous, 2215u);
  EXPECT_EQ(c.count(Category::kDiscredit), 1014u);
  EXPECT_EQ(c.count(Category::kDerailing), 92u);
  EXPECT_EQ(c.count(Category::kDominance), 148u);
  EXPECT_EQ(c.count(Category::kSexualHarassment), 352u);
  EXPECT_EQ(c.count(Category::kStereotype), 179u);
  EXPECT_EQ(c.count(Target::kActive), 1058u);
  EXPECT_EQ(c.count(Target::kPassive), 727u);
}

TEST(Corpus, WriteLoadRoundTrip) {
  const Dataset d = load_dataset(data_path("synth_train.tsv")).dataset;
  TempDir dir("corpus");
  write_dataset(dir / "copy.tsv", d);
  const Dataset back = load_dataset(dir / "copy.tsv").dataset;
  EXPECT_EQ(back.tweets, d.tweets);
  EXPECT_EQ(format_dataset(back), format_dataset(d));
}

TEST(Corpus, FormatRejectsTabsInText) {
  Dataset d{{{"1", "a\tb", 0, Category::kNone, Target::kNone}}, true};
  EXPECT_THROW(format_dataset(d), DataError);
}

TEST(Split, EightyTwentyOnFourThousand) {
  const Dataset d = load_dataset(data_path("table1_train.tsv")).dataset;
  auto [train, test] = split(d, 0.8, 7);
  EXPECT_EQ(train.size(), 3200u);
  EXPECT_EQ(test.size(), 800u);
  const auto ct = label_distribution(train);
  // 1785 * 0.8 = 1428, 2215 * 0.8 = 1772 exactly.
  EXPECT_NEAR(static_cast<double>(ct.misogynous), 1428.0, 1.0);
  EXPECT_NEAR(static_cast<double>(ct.not_misogynous), 1772.0, 1.0);
}

TEST(Split, IsAPartition) {
  const Dataset d = load_dataset(data_path("synth_train.tsv")).dataset;
  for (double f : {0.1, 0.33, 0.5, 0.9}) {
    auto [a, b] = split(d, f, 11);
    std::multiset<std::string> ids;
    for (const auto& t : a.tweets) ids.insert(t.id);
    for (const auto& t : b.tweets) ids.insert(t.id);
    std::multiset<std::string> expected;
    for (const auto& t : d.tweets) expected.insert(t.id);
    EXPECT_EQ(ids, expected) << "fraction " << f;
  }
}

TEST(Split, DeterministicForSeed) {
  const Dataset d = load_dataset(data_path("synth_train.tsv")).dataset;
  auto [a1, b1] = split(d, 0.7, 3);
  auto [a2, b2] = split(d, 0.7, 3);
  EXPECT_EQ(a1.tweets, a2.tweets);
  EXPECT_EQ(b1.tweets, b2.tweets);
  auto [a3, b3] = split(d, 0.7, 4);
  EXPECT_NE(a1.tweets, a3.tweets);
}

TEST(Split, HalfOfBalancedPair) {
  Dataset d = parse("1\ta\t1\tdiscredit\tactive\n2\tb\t1\tstereotype\tpassive\n");
  auto [a, b] = split(d, 0.5, 1);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(a.tweets[0].misogynous, 1);
  EXPECT_EQ(b.tweets[0].misogynous, 1);
}

TEST(Split, RejectsEmptySide) {
  Dataset d = parse("1\ta\t1\tdiscredit\tactive\n2\tb\t0\t0\t0\n");
  EXPECT_THROW(split(d, 0.1, 1), DataError);
  EXPECT_THROW(split(d, 1.0, 1), DataError);
}

TEST(RunFile, Lines) {
  EXPECT_EQ(format_run_file({{"42", 1, Category::kDiscredit, Target::kActive}}),
            "42\t1\tdiscredit\tactive\n");
  EXPECT_EQ(format_run_file({{"7", 0, Category::kNone, Target::kNone}}),
            "7\t0\t0\t0\n");
  EXPECT_EQ(format_run_file(
                {{"9", 1, Category::kSexualHarassment, Target::kPassive}}),
            "9\t1\tsexual_harassment\tpassive\n");
}

TEST(RunFile, RoundTrip) {
  const std::vector<RunRecord> records = {
      {"42", 1, Category::kDiscredit, Target::kActive},
      {"7", 0, Category::kNone, Target::kNone},
      {"x9", 1, Category::kDerailing, Target::kPassive}};
  TempDir dir("run");
  write_run_file(dir / "run.tsv", records);
  EXPECT_EQ(load_predictions(dir / "run.tsv"), records);
}

TEST(RunFile, BadLineRejected) {
  EXPECT_THROW(parse_predictions("1\t1\tdiscredit\n", "x"), DataError);
  EXPECT_THROW(parse_predictions("1\t3\t0\t0\n", "x"), DataError);
}

}  // namespace
}  // namespace ami
