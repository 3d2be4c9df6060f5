#ifndef AMI_EVALUATION_H_
#define AMI_EVALUATION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ami/corpus.h"

namespace ami {

// counts(gold, pred) over a declared class list; labels outside the list land
// in an extra trailing "other" row/column.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<int> classes);

  void add(int gold, int pred);
  std::size_t count(std::size_t gold_index, std::size_t pred_index) const;
  std::size_t total() const { return total_; }
  const std::vector<int>& classes() const { return classes_; }
  // Index of a label, or classes().size() for "other".
  std::size_t index_of(int label) const;

 private:
  std::vector<int> classes_;
  std::vector<std::size_t> counts_;  // (k + 1) x (k + 1)
  std::size_t total_ = 0;
};

struct ClassScore {
  int label = 0;
  std::string name;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  std::size_t true_positive = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // Present in the gold data but never recovered.
  bool missed() const { return support > 0 && true_positive == 0; }
};

// Zero denominators give 0 for precision, recall and F1.
double accuracy(std::span<const int> gold, std::span<const int> pred);
std::vector<ClassScore> per_class_report(std::span<const int> gold,
                                         std::span<const int> pred,
                                         std::span<const int> classes,
                                         std::span<const std::string> names = {});
// Unweighted mean of per-class F1 over the declared classes.
double macro_f1(std::span<const int> gold, std::span<const int> pred,
                std::span<const int> classes);

enum class TaskBVariant {
  // Gold-misogynous tweets only; 5 categories and {active, passive}.
  kGoldMisogynous,
  // All tweets, with NONE as an extra class at both levels.
  kWithNone,
};
std::string_view to_string(TaskBVariant v);
TaskBVariant parse_task_b_variant(std::string_view s);

struct ScoreReport {
  std::optional<double> accuracy;
  std::vector<ClassScore> misogyny_classes;
  std::optional<double> misogyny_macro_f1;

  std::vector<ClassScore> category_classes;
  std::optional<double> category_macro_f1;
  std::vector<ClassScore> target_classes;
  std::optional<double> target_macro_f1;
  std::optional<double> task_b_average;
  std::size_t task_b_items = 0;
};

ScoreReport task_a_score(std::span<const int> gold, std::span<const int> pred);

using LabelPair = std::pair<Category, Target>;
ScoreReport task_b_score(std::span<const LabelPair> gold,
                         std::span<const LabelPair> pred,
                         TaskBVariant variant = TaskBVariant::kGoldMisogynous);

enum class Task { kA, kB };
std::string_view to_string(Task t);
Task parse_task(std::string_view s);

// Aligns predictions to the gold dataset by id. Throws DataError when an id is
// missing, duplicated or unknown.
ScoreReport evaluate_run(const Dataset& gold, const std::vector<RunRecord>& run,
                         Task task,
                         TaskBVariant variant = TaskBVariant::kGoldMisogynous);

// Human-readable aligned table and TSV (section, class, precision, recall, f1,
// support, predicted).
std::string format_report(const ScoreReport& r);
std::string format_report_tsv(const ScoreReport& r);

}  // namespace ami

#endif  // AMI_EVALUATION_H_
