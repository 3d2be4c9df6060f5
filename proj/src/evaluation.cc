#include "ami/evaluation.h"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "ami/errors.h"
#include "text_io.h"

namespace ami {
namespace {

void check_lengths(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predicted label counts differ (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  }
}

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double mean_f1(const std::vector<ClassScore>& rows) {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.f1;
  return s / static_cast<double>(rows.size());
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<int> classes)
    : classes_(std::move(classes)),
      counts_((classes_.size() + 1) * (classes_.size() + 1), 0) {}

std::size_t ConfusionMatrix::index_of(int label) const {
  auto it = std::find(classes_.begin(), classes_.end(), label);
  return static_cast<std::size_t>(it - classes_.begin());
}

void ConfusionMatrix::add(int gold, int pred) {
  ++counts_[index_of(gold) * (classes_.size() + 1) + index_of(pred)];
  ++total_;
}

std::size_t ConfusionMatrix::count(std::size_t gold_index,
                                   std::size_t pred_index) const {
  return counts_[gold_index * (classes_.size() + 1) + pred_index];
}

double accuracy(std::span<const int> gold, std::span<const int> pred) {
  check_lengths(gold, pred);
  if (gold.empty()) throw DataError("accuracy of an empty set is undefined");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::vector<ClassScore> per_class_report(std::span<const int> gold,
                                         std::span<const int> pred,
                                         std::span<const int> classes,
                                         std::span<const std::string> names) {
  check_lengths(gold, pred);
  ConfusionMatrix cm(std::vector<int>(classes.begin(), classes.end()));
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], pred[i]);
  const std::size_t k = classes.size();
  std::vector<ClassScore> rows;
  rows.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    ClassScore s;
    s.label = classes[c];
    s.name = c < names.size() ? names[c] : std::to_string(classes[c]);
    for (std::size_t j = 0; j <= k; ++j) {
      s.support += cm.count(c, j);
      s.predicted += cm.count(j, c);
    }
    s.true_positive = cm.count(c, c);
    s.precision = safe_div(static_cast<double>(s.true_positive),
                           static_cast<double>(s.predicted));
    s.recall = safe_div(static_cast<double>(s.true_positive),
                        static_cast<double>(s.support));
    s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
    rows.push_back(std::move(s));
  }
  return rows;
}

double macro_f1(std::span<const int> gold, std::span<const int> pred,
                std::span<const int> classes) {
  if (classes.empty()) throw DataError("macro-F1 needs at least one class");
  return mean_f1(per_class_report(gold, pred, classes));
}

std::string_view to_string(TaskBVariant v) {
  return v == TaskBVariant::kGoldMisogynous ? "gold-misogynous" : "with-none";
}

TaskBVariant parse_task_b_variant(std::string_view s) {
  if (s == "gold-misogynous") return TaskBVariant::kGoldMisogynous;
  if (s == "with-none") return TaskBVariant::kWithNone;
  throw UsageError("unknown task B scoring variant '" + std::string(s) + "'");
}

std::string_view to_string(Task t) { return t == Task::kA ? "A" : "B"; }

Task parse_task(std::string_view s) {
  if (s == "A" || s == "a") return Task::kA;
  if (s == "B" || s == "b") return Task::kB;
  throw UsageError("unknown task '" + std::string(s) + "' (expected A or B)");
}

ScoreReport task_a_score(std::span<const int> gold, std::span<const int> pred) {
  ScoreReport r;
  r.accuracy = accuracy(gold, pred);
  const int classes[] = {0, 1};
  const std::string names[] = {"not_misogynous", "misogynous"};
  r.misogyny_classes = per_class_report(gold, pred, classes, names);
  r.misogyny_macro_f1 = mean_f1(r.misogyny_classes);
  return r;
}

ScoreReport task_b_score(std::span<const LabelPair> gold,
                         std::span<const LabelPair> pred, TaskBVariant variant) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predicted label counts differ");
  }
  std::vector<int> gc, pc, gt, pt;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool gold_misogynous = gold[i].first != Category::kNone;
    if (variant == TaskBVariant::kGoldMisogynous && !gold_misogynous) continue;
    gc.push_back(static_cast<int>(gold[i].first));
    pc.push_back(static_cast<int>(pred[i].first));
    gt.push_back(static_cast<int>(gold[i].second));
    pt.push_back(static_cast<int>(pred[i].second));
  }
  std::vector<int> cat_classes, tgt_classes;
  std::vector<std::string> cat_names, tgt_names;
  if (variant == TaskBVariant::kWithNone) {
    cat_classes.push_back(static_cast<int>(Category::kNone));
    cat_names.emplace_back("none");
    tgt_classes.push_back(static_cast<int>(Target::kNone));
    tgt_names.emplace_back("none");
  }
  for (Category c : kCategories) {
    cat_classes.push_back(static_cast<int>(c));
    cat_names.emplace_back(to_string(c));
  }
  for (Target t : kTargets) {
    tgt_classes.push_back(static_cast<int>(t));
    tgt_names.emplace_back(to_string(t));
  }
  ScoreReport r;
  r.task_b_items = gc.size();
  r.category_classes = per_class_report(gc, pc, cat_classes, cat_names);
  r.target_classes = per_class_report(gt, pt, tgt_classes, tgt_names);
  r.category_macro_f1 = mean_f1(r.category_classes);
  r.target_macro_f1 = mean_f1(r.target_classes);
  r.task_b_average = 0.5 * (*r.category_macro_f1 + *r.target_macro_f1);
  return r;
}

ScoreReport evaluate_run(const Dataset& gold, const std::vector<RunRecord>& run,
                         Task task, TaskBVariant variant) {
  if (!gold.has_labels) throw DataError("gold dataset has no labels");
  std::unordered_map<std::string, const RunRecord*> by_id;
  for (const auto& r : run) {
    if (!by_id.emplace(r.id, &r).second) {
      throw DataError("duplicate prediction for id '" + r.id + "'");
    }
  }
  if (by_id.size() != gold.size()) {
    for (const auto& r : run) {
      bool known = std::any_of(gold.tweets.begin(), gold.tweets.end(),
                               [&](const LabeledTweet& t) { return t.id == r.id; });
      if (!known) throw DataError("prediction for unknown id '" + r.id + "'");
    }
  }
  std::vector<int> gold_a, pred_a;
  std::vector<LabelPair> gold_b, pred_b;
  for (const auto& t : gold.tweets) {
    auto it = by_id.find(t.id);
    if (it == by_id.end()) throw DataError("no prediction for id '" + t.id + "'");
    gold_a.push_back(t.misogynous);
    pred_a.push_back(it->second->misogynous);
    gold_b.emplace_back(t.category, t.target);
    pred_b.emplace_back(it->second->category, it->second->target);
  }
  ScoreReport report = task_a_score(gold_a, pred_a);
  if (task == Task::kB) {
    ScoreReport b = task_b_score(gold_b, pred_b, variant);
    report.category_classes = std::move(b.category_classes);
    report.category_macro_f1 = b.category_macro_f1;
    report.target_classes = std::move(b.target_classes);
    report.target_macro_f1 = b.target_macro_f1;
    report.task_b_average = b.task_b_average;
    report.task_b_items = b.task_b_items;
  }
  return report;
}

namespace {

void table_section(std::ostringstream& os, std::string_view title,
                   const std::vector<ClassScore>& rows,
                   std::optional<double> macro) {
  if (rows.empty()) return;
  os << title << '\n';
  os << "  " << std::left << std::setw(20) << "class" << std::right
     << std::setw(10) << "precision" << std::setw(10) << "recall"
     << std::setw(10) << "f1" << std::setw(10) << "support" << std::setw(11)
     << "predicted" << '\n';
  for (const auto& r : rows) {
    os << "  " << std::left << std::setw(20) << r.name << std::right << std::fixed
       << std::setprecision(4) << std::setw(10) << r.precision << std::setw(10)
       << r.recall << std::setw(10) << r.f1 << std::setw(10) << r.support
       << std::setw(11) << r.predicted << (r.missed() ? "  <- never recovered" : "")
       << '\n';
  }
  if (macro) {
    os << "  " << std::left << std::setw(40) << "macro-F1" << std::right
       << std::setw(10) << std::fixed << std::setprecision(4) << *macro << '\n';
  }
}

void tsv_section(std::string& out, std::string_view section,
                 const std::vector<ClassScore>& rows, std::optional<double> macro) {
  for (const auto& r : rows) {
    out += std::string(section) + '\t' + r.name + '\t' +
           io::format_double(r.precision) + '\t' + io::format_double(r.recall) +
           '\t' + io::format_double(r.f1) + '\t' + std::to_string(r.support) +
           '\t' + std::to_string(r.predicted) + '\n';
  }
  if (macro) {
    out += std::string(section) + "\tmacro_f1\t\t\t" + io::format_double(*macro) +
           "\t\t\n";
  }
}

}  // namespace

std::string format_report(const ScoreReport& r) {
  std::ostringstream os;
  if (r.accuracy) {
    os << "accuracy " << std::fixed << std::setprecision(4) << *r.accuracy << '\n';
  }
  table_section(os, "misogyny", r.misogyny_classes, r.misogyny_macro_f1);
  table_section(os, "category", r.category_classes, r.category_macro_f1);
  table_section(os, "target", r.target_classes, r.target_macro_f1);
  if (r.task_b_average) {
    os << "task B average F1 " << std::fixed << std::setprecision(4)
       << *r.task_b_average << " over " << r.task_b_items << " tweets\n";
  }
  return os.str();
}

std::string format_report_tsv(const ScoreReport& r) {
  std::string out = "section\tclass\tprecision\trecall\tf1\tsupport\tpredicted\n";
  if (r.accuracy) out += "misogyny\taccuracy\t\t\t" + io::format_double(*r.accuracy) + "\t\t\n";
  tsv_section(out, "misogyny", r.misogyny_classes, r.misogyny_macro_f1);
  tsv_section(out, "category", r.category_classes, r.category_macro_f1);
  tsv_section(out, "target", r.target_classes, r.target_macro_f1);
  if (r.task_b_average) {
    out += "task_b\taverage\t\t\t" + io::format_double(*r.task_b_average) + "\t\t\n";
  }
  return out;
}

}  // namespace ami
