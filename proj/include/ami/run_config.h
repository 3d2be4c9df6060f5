#ifndef AMI_RUN_CONFIG_H_
#define AMI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ami/evaluation.h"
#include "ami/features.h"
#include "ami/multiclass.h"

namespace ami {

struct RunPaths {
  std::filesystem::path train;
  std::filesystem::path test;
  std::filesystem::path word_embeddings;
  std::vector<std::filesystem::path> sentence_embeddings;
  // Directory with contractions.tsv, stopwords_en.txt, emoji_ranges.txt;
  // empty means the bundled data directory.
  std::filesystem::path resources;
  std::filesystem::path model;
  std::filesystem::path output;
  std::filesystem::path probabilities;
  std::filesystem::path report;

  bool operator==(const RunPaths&) const = default;
};

struct RunConfig {
  Task task = Task::kA;
  RunPaths paths;
  EnabledBlocks blocks;
  // Task A classifier, and the gate in task B.
  EngineConfig gate;
  // Stage-2 classifiers; required for task B.
  std::optional<EngineConfig> category;
  std::optional<EngineConfig> target;
  TaskBVariant task_b_variant = TaskBVariant::kGoldMisogynous;
  bool strict = true;
  // When > 0 and no test file is given, the training file is split
  // (stratified) and this fraction is kept for training.
  double holdout_fraction = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;

  // Throws UsageError on inconsistent settings.
  void validate() const;
  // Throws UsageError naming a referenced file that does not exist.
  void check_paths(bool need_test) const;

  bool operator==(const RunConfig&) const = default;
};

// JSON config. Relative paths resolve against base_dir. Unknown keys and
// malformed documents raise UsageError. Keys absent from the document keep the
// value already in `into`.
void apply_config_json(std::string_view text, const std::filesystem::path& base_dir,
                       RunConfig& into);
RunConfig load_run_config(const std::filesystem::path& path,
                          RunConfig defaults = {});

std::string format_run_config(const RunConfig& c);

}  // namespace ami

#endif  // AMI_RUN_CONFIG_H_
