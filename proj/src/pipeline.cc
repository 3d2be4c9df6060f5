#include "ami/pipeline.h"

#include "ami/errors.h"
#include "json_codec.h"
#include "text_io.h"

namespace ami {
namespace {

using codec::Json;

constexpr const char* kBundleFormat = "ami-bundle";

std::vector<std::string> category_labels() {
  std::vector<std::string> out;
  for (Category c : kCategories) out.emplace_back(to_string(c));
  return out;
}

std::vector<std::string> target_labels() {
  std::vector<std::string> out;
  for (Target t : kTargets) out.emplace_back(to_string(t));
  return out;
}

std::vector<TokenSequence> preprocess_all(const Dataset& d,
                                          const PreprocessConfig& config,
                                          const Parallelism& par) {
  const Preprocessor pre(config);
  std::vector<TokenSequence> docs(d.size());
  parallel_for(d.size(), par, [&](std::size_t i) {
    docs[i] = pre(d.tweets[i].text, d.tweets[i].id);
  });
  return docs;
}

void check_bundle(const ModelBundle& b) {
  const std::uint64_t fp = b.space.fingerprint();
  auto model_fp = [](const BinaryModel& m) {
    return std::visit([](const auto& x) { return x.fingerprint; }, m);
  };
  if (model_fp(b.gate) != fp) {
    throw DataError("gate model was trained on a different feature space");
  }
  for (const auto* mc : {&b.category, &b.target}) {
    if (!*mc) continue;
    for (const auto& s : (*mc)->submodels) {
      if (model_fp(s) != fp) {
        throw DataError("stage-2 model was trained on a different feature space");
      }
    }
  }
  if (b.task == Task::kB) {
    if (!b.category || !b.target) throw DataError("task B bundle lacks stage-2 models");
    if (b.category->labels != category_labels()) {
      throw DataError("category model labels do not match the taxonomy");
    }
    if (b.target->labels != target_labels()) {
      throw DataError("target model labels do not match the taxonomy");
    }
  }
}

}  // namespace

std::string serialize_bundle(const ModelBundle& b) {
  Json j{{"format", kBundleFormat},
         {"format_version", kBundleFormatVersion},
         {"task", to_string(b.task)},
         {"preprocess", codec::to_json(b.preprocess)},
         {"feature_space", codec::to_json(b.space)},
         {"gate", codec::to_json(b.gate)}};
  if (b.category) j["category"] = codec::to_json(*b.category);
  if (b.target) j["target"] = codec::to_json(*b.target);
  return j.dump(1) + "\n";
}

ModelBundle parse_bundle(std::string_view text, const std::string& source_name) {
  const Json j = codec::parse(text, source_name);
  try {
    if (!j.is_object() || !j.contains("format") ||
        codec::get_string(j, "format") != kBundleFormat) {
      throw DataError("not an ami model bundle");
    }
    const long long version = codec::get_int(j, "format_version");
    if (version != kBundleFormatVersion) {
      throw DataError("bundle format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kBundleFormatVersion) + ")");
    }
    ModelBundle b{.task = Task::kA,
                  .preprocess = codec::preprocess_config_from_json(codec::field(j, "preprocess")),
                  .space = codec::feature_space_from_json(codec::field(j, "feature_space")),
                  .gate = codec::binary_model_from_json(codec::field(j, "gate")),
                  .category = std::nullopt,
                  .target = std::nullopt};
    const std::string task = codec::get_string(j, "task");
    if (task != "A" && task != "B") throw DataError("unknown task '" + task + "'");
    b.task = task == "A" ? Task::kA : Task::kB;
    if (j.contains("category")) {
      b.category = codec::multiclass_model_from_json(j.at("category"));
    }
    if (j.contains("target")) b.target = codec::multiclass_model_from_json(j.at("target"));
    check_bundle(b);
    return b;
  } catch (const DataError& e) {
    throw DataError(source_name + ": " + e.what());
  }
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  io::write_file(path, serialize_bundle(b));
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  return parse_bundle(io::read_file(path), path.string());
}

ModelBundle train_bundle(const Dataset& train, const PreprocessConfig& preprocess,
                         const TrainOptions& options, const EmbeddingSources& sources,
                         const Parallelism& par) {
  if (!train.has_labels) throw DataError("training data has no labels");
  if (options.task == Task::kB && (!options.category || !options.target)) {
    throw UsageError("task B needs category and target engines");
  }
  const auto docs = preprocess_all(train, preprocess, par);

  ModelBundle b{.task = options.task,
                .preprocess = preprocess,
                .space = {},
                .gate = {},
                .category = std::nullopt,
                .target = std::nullopt};
  b.space.blocks = options.blocks;
  if (options.blocks.tfidf) b.space.vocabulary = TfidfVocabulary::fit(docs);
  if (sources.words) b.space.word_dim = sources.words->dim();
  if (sources.sentences) b.space.sentence_dim = sources.sentences->dim();

  const auto x = featurize_all(docs, b.space, sources.words, sources.sentences, par);
  std::vector<int> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) y[i] = train.tweets[i].misogynous;
  b.gate = train_binary(x, y, options.gate, par);

  if (options.task == Task::kB) {
    std::vector<FeatureVector> xm;
    std::vector<int> yc, yt;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto& t = train.tweets[i];
      if (t.misogynous != 1) continue;
      if (t.category == Category::kNone || t.target == Target::kNone) {
        throw DataError("misogynous training tweet '" + t.id +
                        "' lacks a category or target");
      }
      xm.push_back(x[i]);
      yc.push_back(static_cast<int>(t.category) - 1);
      yt.push_back(static_cast<int>(t.target) - 1);
    }
    if (xm.empty()) throw DataError("no misogynous training tweets for stage 2");
    b.category = train_multiclass(xm, yc, category_labels(), *options.category, par);
    b.target = train_multiclass(xm, yt, target_labels(), *options.target, par);
  }
  return b;
}

std::vector<PredictionRecord> predict_bundle(const ModelBundle& bundle,
                                             const Dataset& data,
                                             const EmbeddingSources& sources,
                                             const Parallelism& par) {
  check_bundle(bundle);
  const auto docs = preprocess_all(data, bundle.preprocess, par);
  const auto x = featurize_all(docs, bundle.space, sources.words, sources.sentences, par);
  std::vector<PredictionRecord> out(data.size());
  parallel_for(data.size(), par, [&](std::size_t i) {
    PredictionRecord& r = out[i];
    r.id = data.tweets[i].id;
    r.p_misogynous = predict_proba(bundle.gate, x[i]);
    r.misogynous = r.p_misogynous >= 0.5 ? 1 : 0;
    if (bundle.task == Task::kB && r.misogynous == 1) {
      r.p_category = bundle.category->predict_proba(x[i]);
      r.p_target = bundle.target->predict_proba(x[i]);
      r.category = kCategories[argmax_first(r.p_category)];
      r.target = kTargets[argmax_first(r.p_target)];
    }
  });
  return out;
}

std::vector<RunRecord> to_run_records(const std::vector<PredictionRecord>& p) {
  std::vector<RunRecord> out;
  out.reserve(p.size());
  for (const auto& r : p) out.push_back(r.record());
  return out;
}

std::string format_probabilities(const std::vector<PredictionRecord>& p) {
  std::string out = "id\tmisogynous\tcategory\ttarget\tp_misogynous";
  for (Category c : kCategories) out += "\tp_" + std::string(to_string(c));
  for (Target t : kTargets) out += "\tp_" + std::string(to_string(t));
  out += '\n';
  for (const auto& r : p) {
    out += r.id + '\t' + std::to_string(r.misogynous) + '\t' +
           std::string(to_string(r.category)) + '\t' +
           std::string(to_string(r.target)) + '\t' + io::format_double(r.p_misogynous);
    for (std::size_t c = 0; c < kCategories.size(); ++c) {
      out += '\t';
      if (!r.p_category.empty()) out += io::format_double(r.p_category[c]);
    }
    for (std::size_t t = 0; t < kTargets.size(); ++t) {
      out += '\t';
      if (!r.p_target.empty()) out += io::format_double(r.p_target[t]);
    }
    out += '\n';
  }
  return out;
}

EmbeddingSources RunInputs::sources() const {
  return {words ? &*words : nullptr, sentences ? &*sentences : nullptr};
}

RunInputs load_run_inputs(const RunConfig& config) {
  config.validate();
  config.check_paths(true);
  RunInputs in;
  const LoadOptions opts{.labeled = true, .strict = config.strict};
  auto collect = [&](const LoadResult& r, const std::filesystem::path& p) {
    for (const auto& issue : r.issues) {
      in.warnings.push_back(io::location(p.string(), issue.line) + ": " + issue.message);
    }
  };
  LoadResult train = load_dataset(config.paths.train, opts);
  collect(train, config.paths.train);
  if (!config.paths.test.empty()) {
    in.train = std::move(train.dataset);
    LoadResult test = load_dataset(config.paths.test, opts);
    collect(test, config.paths.test);
    in.test = std::move(test.dataset);
  } else {
    auto [tr, te] = split(train.dataset, config.holdout_fraction, config.seed);
    in.train = std::move(tr);
    in.test = std::move(te);
  }
  in.preprocess = config.paths.resources.empty()
                      ? PreprocessConfig::load_default()
                      : PreprocessConfig::load(config.paths.resources);
  if (config.blocks.bowv) {
    in.words = WordEmbeddingTable::load(config.paths.word_embeddings,
                                        {.strict = config.strict});
    if (in.words->skipped_lines() > 0) {
      in.warnings.push_back(config.paths.word_embeddings.string() + ": skipped " +
                            std::to_string(in.words->skipped_lines()) +
                            " malformed lines");
    }
    if (in.words->duplicate_words() > 0) {
      in.warnings.push_back(config.paths.word_embeddings.string() + ": " +
                            std::to_string(in.words->duplicate_words()) +
                            " duplicate words (last kept)");
    }
  }
  if (config.blocks.sentence) {
    in.sentences = SentenceEmbeddingStore::load_all(config.paths.sentence_embeddings);
  }
  return in;
}

TrainOptions train_options(const RunConfig& config) {
  return {.task = config.task,
          .blocks = config.blocks,
          .gate = config.gate,
          .category = config.category,
          .target = config.target};
}

namespace {

RunResult run_impl(const RunConfig& config, const RunInputs& inputs) {
  config.validate();
  const Parallelism par{config.threads};
  RunResult r;
  r.bundle = train_bundle(inputs.train, inputs.preprocess, train_options(config),
                          inputs.sources(), par);
  r.predictions = predict_bundle(r.bundle, inputs.test, inputs.sources(), par);
  if (inputs.test.has_labels) {
    r.report = evaluate_run(inputs.test, to_run_records(r.predictions), config.task,
                            config.task_b_variant);
  }
  return r;
}

}  // namespace

RunResult run_task_a(const RunConfig& config, const RunInputs& inputs) {
  if (config.task != Task::kA) throw UsageError("config is not set to task A");
  return run_impl(config, inputs);
}

RunResult run_task_b(const RunConfig& config, const RunInputs& inputs) {
  if (config.task != Task::kB) throw UsageError("config is not set to task B");
  return run_impl(config, inputs);
}

RunResult run(const RunConfig& config, const RunInputs& inputs) {
  return config.task == Task::kA ? run_task_a(config, inputs)
                                 : run_task_b(config, inputs);
}

void write_run_outputs(const RunConfig& config, const RunResult& result) {
  const RunPaths& p = config.paths;
  if (!p.model.empty()) save_bundle(result.bundle, p.model);
  if (!p.output.empty()) write_run_file(p.output, to_run_records(result.predictions));
  if (!p.probabilities.empty()) {
    io::write_file(p.probabilities, format_probabilities(result.predictions));
  }
  if (!p.report.empty() && result.report) {
    io::write_file(p.report, format_report_tsv(*result.report));
  }
}

}  // namespace ami
