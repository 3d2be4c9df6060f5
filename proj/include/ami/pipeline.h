#ifndef AMI_PIPELINE_H_
#define AMI_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ami/corpus.h"
#include "ami/evaluation.h"
#include "ami/features.h"
#include "ami/multiclass.h"
#include "ami/preprocess.h"
#include "ami/run_config.h"

namespace ami {

inline constexpr int kBundleFormatVersion = 1;

// Everything needed to predict: preprocessing resources, the fitted feature
// space and the trained classifiers. Category labels follow kCategories and
// target labels follow kTargets.
struct ModelBundle {
  Task task = Task::kA;
  PreprocessConfig preprocess;
  FeatureSpace space;
  BinaryModel gate;
  std::optional<MulticlassModel> category;
  std::optional<MulticlassModel> target;
};

std::string serialize_bundle(const ModelBundle& b);
ModelBundle parse_bundle(std::string_view text,
                         const std::string& source_name = "<memory>");
void save_bundle(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

// Embedding sources; either may be null when its block is disabled.
struct EmbeddingSources {
  const WordEmbeddingTable* words = nullptr;
  const SentenceEmbeddingStore* sentences = nullptr;
};

struct TrainOptions {
  Task task = Task::kA;
  EnabledBlocks blocks;
  EngineConfig gate;
  std::optional<EngineConfig> category;
  std::optional<EngineConfig> target;
};

// Fits tf-idf on the training tokens, trains the gate on all tweets and, for
// task B, the stage-2 models on the gold-misogynous tweets.
ModelBundle train_bundle(const Dataset& train, const PreprocessConfig& preprocess,
                         const TrainOptions& options, const EmbeddingSources& sources,
                         const Parallelism& par = {});

struct PredictionRecord {
  std::string id;
  int misogynous = 0;
  Category category = Category::kNone;
  Target target = Target::kNone;
  double p_misogynous = 0.0;
  // Empty unless the stage-2 models ran for this tweet.
  std::vector<double> p_category;
  std::vector<double> p_target;

  RunRecord record() const { return {id, misogynous, category, target}; }
};

// Tweets rejected by the gate get (0, NONE, NONE). For a task A bundle the
// category and target stay NONE.
std::vector<PredictionRecord> predict_bundle(const ModelBundle& bundle,
                                             const Dataset& data,
                                             const EmbeddingSources& sources,
                                             const Parallelism& par = {});

std::vector<RunRecord> to_run_records(const std::vector<PredictionRecord>& p);
// `id misogynous category target p_misogynous p_<category>... p_<target>...`
// with a header row; missing stage-2 probabilities are left empty.
std::string format_probabilities(const std::vector<PredictionRecord>& p);

// Loaded inputs for an end-to-end run.
struct RunInputs {
  Dataset train;
  Dataset test;
  PreprocessConfig preprocess;
  std::optional<WordEmbeddingTable> words;
  std::optional<SentenceEmbeddingStore> sentences;
  std::vector<std::string> warnings;

  EmbeddingSources sources() const;
};

// Reads every file the config references. Without a test file the training
// file is split with holdout_fraction and seed.
RunInputs load_run_inputs(const RunConfig& config);

struct RunResult {
  ModelBundle bundle;
  std::vector<PredictionRecord> predictions;
  std::optional<ScoreReport> report;
};

RunResult run_task_a(const RunConfig& config, const RunInputs& inputs);
RunResult run_task_b(const RunConfig& config, const RunInputs& inputs);
RunResult run(const RunConfig& config, const RunInputs& inputs);

// Writes the model bundle, run file, probabilities and TSV report for every
// path set in the config.
void write_run_outputs(const RunConfig& config, const RunResult& result);

TrainOptions train_options(const RunConfig& config);

}  // namespace ami

#endif  // AMI_PIPELINE_H_
