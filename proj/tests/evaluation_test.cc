#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ami/errors.h"
#include "ami/evaluation.h"
#include "oracle.h"

namespace ami {
namespace {

using C = Category;
using T = Target;

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{1, 0, 1}), 1.0);
  EXPECT_EQ(accuracy(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 0, 0, 0}), 0.75);
  EXPECT_THROW(accuracy(std::vector<int>{}, std::vector<int>{}), DataError);
  EXPECT_THROW(accuracy(std::vector<int>{1}, std::vector<int>{1, 0}), DataError);
}

TEST(MacroF1, WorkedExample) {
  const std::vector<int> gold = {0, 0, 1, 1}, pred = {0, 1, 1, 1};
  const std::vector<int> classes = {0, 1};
  const auto rows = per_class_report(gold, pred, classes);
  EXPECT_NEAR(rows[0].f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rows[1].f1, 0.8, 1e-12);
  EXPECT_NEAR(macro_f1(gold, pred, classes), 0.733333333333, 1e-9);
}

TEST(MacroF1, PerfectAndAbsentClass) {
  const std::vector<int> y = {0, 1, 1, 0};
  EXPECT_EQ(macro_f1(y, y, std::vector<int>{0, 1}), 1.0);
  // Third declared class neither gold nor predicted contributes 0.
  EXPECT_NEAR(macro_f1(y, y, std::vector<int>{0, 1, 2}), 2.0 / 3.0, 1e-15);
}

TEST(MacroF1, SingleClassEqualsItsF1) {
  const std::vector<int> gold = {0, 1, 2, 1, 1}, pred = {1, 1, 2, 0, 1};
  const std::vector<int> one = {1};
  EXPECT_EQ(macro_f1(gold, pred, one), per_class_report(gold, pred, one)[0].f1);
}

TEST(Metrics, MatchBruteForceOnRandomFixtures) {
  std::mt19937_64 rng(2024);
  for (int fixture = 0; fixture < 20; ++fixture) {
    std::uniform_int_distribution<int> n_dist(1, 60), k_dist(2, 6);
    const int k = k_dist(rng);
    std::uniform_int_distribution<int> label(0, k);  // k itself is undeclared
    std::vector<int> gold(static_cast<std::size_t>(n_dist(rng))), pred(gold.size());
    for (auto& g : gold) g = label(rng);
    for (auto& p : pred) p = label(rng);
    std::vector<int> classes(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) classes[static_cast<std::size_t>(c)] = c;

    EXPECT_EQ(accuracy(gold, pred), oracle::accuracy(gold, pred)) << fixture;
    EXPECT_EQ(macro_f1(gold, pred, classes), oracle::macro_f1(gold, pred, classes))
        << fixture;
    const auto rows = per_class_report(gold, pred, classes);
    const auto counts = oracle::enumerate_counts(gold, pred, classes);
    std::size_t support = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      EXPECT_EQ(rows[c].true_positive, counts[c].tp);
      EXPECT_EQ(rows[c].predicted, counts[c].tp + counts[c].fp);
      EXPECT_EQ(rows[c].support, counts[c].tp + counts[c].fn);
      EXPECT_EQ(rows[c].f1, oracle::f1_from_counts(counts[c]));
      support += rows[c].support;
    }
    const auto undeclared = static_cast<std::size_t>(std::count(gold.begin(), gold.end(), k));
    EXPECT_EQ(support + undeclared, gold.size());

    // Item order does not matter.
    std::vector<std::size_t> perm(gold.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> g2, p2;
    for (auto i : perm) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    EXPECT_EQ(accuracy(g2, p2), accuracy(gold, pred));
    EXPECT_EQ(macro_f1(g2, p2, classes), macro_f1(gold, pred, classes));
  }
}

TEST(PerClassReport, MinorityNeverPredictedIsFlagged) {
  const std::vector<int> gold = {0, 0, 0, 0, 1}, pred = {0, 0, 0, 0, 0};
  const auto rows = per_class_report(gold, pred, std::vector<int>{0, 1});
  EXPECT_EQ(rows[1].recall, 0.0);
  EXPECT_TRUE(rows[1].missed());
  EXPECT_FALSE(rows[0].missed());
  EXPECT_EQ(rows[0].support + rows[1].support, gold.size());
}

TEST(PerClassReport, BalancedPerfect) {
  const std::vector<int> y = {0, 1, 2, 0, 1, 2};
  for (const auto& r : per_class_report(y, y, std::vector<int>{0, 1, 2})) {
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);
    EXPECT_EQ(r.f1, 1.0);
  }
}

TEST(ConfusionMatrix, CountsAndOther) {
  ConfusionMatrix cm({3, 5});
  cm.add(3, 3);
  cm.add(3, 5);
  cm.add(5, 9);
  cm.add(9, 9);
  EXPECT_EQ(cm.total(), 4u);
  EXPECT_EQ(cm.count(0, 0), 1u);
  EXPECT_EQ(cm.count(0, 1), 1u);
  EXPECT_EQ(cm.count(1, 2), 1u);
  EXPECT_EQ(cm.count(2, 2), 1u);
}

// Ten tweets; items 8 and 9 are gold non-misogynous.
struct TaskBFixture {
  std::vector<LabelPair> gold = {
      {C::kDiscredit, T::kActive},  {C::kDiscredit, T::kPassive},
      {C::kStereotype, T::kActive}, {C::kStereotype, T::kPassive},
      {C::kDominance, T::kActive},  {C::kSexualHarassment, T::kActive},
      {C::kDerailing, T::kPassive}, {C::kNone, T::kNone},
      {C::kNone, T::kNone},         {C::kDiscredit, T::kActive}};
  std::vector<LabelPair> pred = {
      {C::kDiscredit, T::kActive},  {C::kDiscredit, T::kActive},
      {C::kDiscredit, T::kActive},  {C::kStereotype, T::kPassive},
      {C::kNone, T::kNone},         {C::kSexualHarassment, T::kActive},
      {C::kDominance, T::kPassive}, {C::kDiscredit, T::kActive},
      {C::kNone, T::kNone},         {C::kDiscredit, T::kPassive}};
};

TEST(TaskB, HandComputedGoldMisogynous) {
  const TaskBFixture f;
  const ScoreReport r = task_b_score(f.gold, f.pred);
  EXPECT_EQ(r.task_b_items, 8u);
  // stereotype 2/3, dominance 0, derailing 0, harassment 1, discredit 6/7.
  EXPECT_NEAR(*r.category_macro_f1, 53.0 / 105.0, 1e-12);
  // active 2/3, passive 2/3.
  EXPECT_NEAR(*r.target_macro_f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(*r.task_b_average, 41.0 / 70.0, 1e-12);
  EXPECT_TRUE(r.category_classes[2].missed());  // derailing
}

TEST(TaskB, HandComputedWithNone) {
  const TaskBFixture f;
  const ScoreReport r = task_b_score(f.gold, f.pred, TaskBVariant::kWithNone);
  EXPECT_EQ(r.task_b_items, 10u);
  // none 1/2, stereotype 2/3, dominance 0, derailing 0, harassment 1, discredit 3/4.
  EXPECT_NEAR(*r.category_macro_f1, 35.0 / 72.0, 1e-12);
  // none 1/2, active 3/5, passive 2/3.
  EXPECT_NEAR(*r.target_macro_f1, 53.0 / 90.0, 1e-12);
  EXPECT_NEAR(*r.task_b_average, 43.0 / 80.0, 1e-12);
}

TEST(TaskB, PerfectPairs) {
  const TaskBFixture f;
  const ScoreReport r = task_b_score(f.gold, f.gold);
  EXPECT_EQ(*r.task_b_average, 1.0);
}

Dataset gold_dataset() {
  Dataset d;
  d.has_labels = true;
  d.tweets = {{"1", "a", 1, C::kDiscredit, T::kActive},
              {"2", "b", 0, C::kNone, T::kNone},
              {"3", "c", 1, C::kDerailing, T::kPassive}};
  return d;
}

TEST(EvaluateRun, AlignsById) {
  const std::vector<RunRecord> run = {{"3", 1, C::kDerailing, T::kPassive},
                                      {"1", 1, C::kDiscredit, T::kActive},
                                      {"2", 1, C::kStereotype, T::kActive}};
  const ScoreReport a = evaluate_run(gold_dataset(), run, Task::kA);
  EXPECT_NEAR(*a.accuracy, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(a.task_b_average.has_value());
  const ScoreReport b = evaluate_run(gold_dataset(), run, Task::kB);
  EXPECT_TRUE(b.task_b_average.has_value());
  EXPECT_EQ(b.task_b_items, 2u);
}

TEST(EvaluateRun, RejectsMissingUnknownDuplicate) {
  const Dataset d = gold_dataset();
  EXPECT_THROW(evaluate_run(d, {{"1", 1, C::kDiscredit, T::kActive}}, Task::kA), DataError);
  EXPECT_THROW(evaluate_run(d,
                            {{"1", 0, C::kNone, T::kNone},
                             {"2", 0, C::kNone, T::kNone},
                             {"3", 0, C::kNone, T::kNone},
                             {"4", 0, C::kNone, T::kNone}},
                            Task::kA),
               DataError);
  EXPECT_THROW(evaluate_run(d,
                            {{"1", 0, C::kNone, T::kNone},
                             {"1", 0, C::kNone, T::kNone},
                             {"3", 0, C::kNone, T::kNone}},
                            Task::kA),
               DataError);
}

TEST(Report, TableAndTsv) {
  const TaskBFixture f;
  const ScoreReport r = task_b_score(f.gold, f.pred);
  const std::string table = format_report(r);
  EXPECT_NE(table.find("derailing"), std::string::npos);
  EXPECT_NE(table.find("never recovered"), std::string::npos);
  const std::string tsv = format_report_tsv(r);
  EXPECT_EQ(tsv.rfind("section\tclass\tprecision\trecall\tf1\tsupport\tpredicted\n", 0), 0u);
  EXPECT_NE(tsv.find("task_b\taverage"), std::string::npos);
  std::size_t lines = std::count(tsv.begin(), tsv.end(), '\n');
  EXPECT_EQ(lines, 1u + 5u + 1u + 2u + 1u + 1u);
}

TEST(Names, TaskAndVariant) {
  EXPECT_EQ(parse_task("a"), Task::kA);
  EXPECT_EQ(parse_task("B"), Task::kB);
  EXPECT_THROW(parse_task("C"), UsageError);
  EXPECT_EQ(parse_task_b_variant("with-none"), TaskBVariant::kWithNone);
  EXPECT_THROW(parse_task_b_variant("other"), UsageError);
}

}  // namespace
}  // namespace ami
