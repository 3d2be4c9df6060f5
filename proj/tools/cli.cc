#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ami/corpus.h"
#include "ami/errors.h"
#include "ami/evaluation.h"
#include "ami/features.h"
#include "ami/pipeline.h"
#include "ami/preprocess.h"
#include "ami/run_config.h"
#include "text_io.h"

namespace ami::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by train and run. Only flags given on the command line
// override the config file.
struct RunFlags {
  std::string config;
  std::string task, train, test, word_embeddings, resources, model, output,
      probabilities, report, blocks, engine, category_engine, target_engine,
      gbdt_preset, task_b_variant;
  std::vector<std::string> sentence_embeddings;
  double lr_c = 1.0, holdout = 0.0;
  int lr_max_iterations = 100, n_trees = 100, max_depth = 6, threads = 1;
  std::uint64_t seed = 0;
  bool lenient = false;
  std::vector<const CLI::Option*> given;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool with_test) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--task", f.task, "A or B");
  app->add_option("--train", f.train, "labelled training TSV");
  if (with_test) {
    app->add_option("--test", f.test, "test TSV (labelled or id/text only)");
    app->add_option("--output", f.output, "run file to write");
    app->add_option("--probabilities", f.probabilities, "per-tweet probabilities TSV");
    app->add_option("--report", f.report, "score report TSV");
    app->add_option("--holdout", f.holdout,
                    "without --test, keep this fraction of --train for training");
    app->add_option("--seed", f.seed, "seed for the holdout split");
    app->add_option("--task-b-variant", f.task_b_variant,
                    "gold-misogynous (default) or with-none");
  }
  app->add_option("--word-embeddings", f.word_embeddings, "300-d word vectors");
  app->add_option("--sentence-embeddings", f.sentence_embeddings,
                  "512-d sentence embedding files");
  app->add_option("--resources", f.resources, "preprocessing resource directory");
  app->add_option("--model", f.model, "model bundle to write");
  app->add_option("--blocks", f.blocks, "comma list of tfidf,bowv,sentence");
  app->add_option("--engine", f.engine, "lr or gbdt (xgb, cb)");
  app->add_option("--category-engine", f.category_engine, "task B category engine");
  app->add_option("--target-engine", f.target_engine, "task B target engine");
  app->add_option("--gbdt-preset", f.gbdt_preset, "xgb-like or cb-like");
  app->add_option("--lr-c", f.lr_c, "inverse L2 strength");
  app->add_option("--lr-max-iterations", f.lr_max_iterations, "Newton iterations");
  app->add_option("--n-trees", f.n_trees, "boosting rounds");
  app->add_option("--max-depth", f.max_depth, "tree depth");
  app->add_option("--threads", f.threads, "worker threads, 0 for all cores");
  app->add_flag("--lenient", f.lenient, "skip malformed rows instead of failing");
}

bool given(const CLI::App* app, const char* name) {
  return app->get_option(name)->count() > 0;
}

EnabledBlocks parse_blocks(const std::string& s) {
  EnabledBlocks b{false, false, false};
  for (std::string_view part : io::split(s, ',')) {
    if (part == "tfidf") b.tfidf = true;
    else if (part == "bowv") b.bowv = true;
    else if (part == "sentence") b.sentence = true;
    else throw UsageError("unknown feature block '" + std::string(part) + "'");
  }
  return b;
}

RunConfig build_config(const CLI::App* app, const RunFlags& f) {
  RunConfig c;
  if (!f.config.empty()) c = load_run_config(f.config);
  auto has = [&](const char* name) {
    return app->get_option_no_throw(name) && given(app, name);
  };
  if (has("--task")) c.task = parse_task(f.task);
  if (has("--train")) c.paths.train = f.train;
  if (has("--test")) c.paths.test = f.test;
  if (has("--output")) c.paths.output = f.output;
  if (has("--probabilities")) c.paths.probabilities = f.probabilities;
  if (has("--report")) c.paths.report = f.report;
  if (has("--holdout")) c.holdout_fraction = f.holdout;
  if (has("--seed")) c.seed = f.seed;
  if (has("--task-b-variant")) c.task_b_variant = parse_task_b_variant(f.task_b_variant);
  if (has("--word-embeddings")) c.paths.word_embeddings = f.word_embeddings;
  if (has("--sentence-embeddings")) {
    c.paths.sentence_embeddings.assign(f.sentence_embeddings.begin(),
                                       f.sentence_embeddings.end());
  }
  if (has("--resources")) c.paths.resources = f.resources;
  if (has("--model")) c.paths.model = f.model;
  if (has("--blocks")) c.blocks = parse_blocks(f.blocks);
  if (has("--threads")) c.threads = f.threads;
  if (has("--lenient")) c.strict = !f.lenient;
  if (has("--engine")) {
    const Engine e = parse_engine(f.engine);
    c.gate.engine = e;
    if (c.category) c.category->engine = e;
    if (c.target) c.target->engine = e;
  }
  if (c.task == Task::kB) {
    if (!c.category) c.category = c.gate;
    if (!c.target) c.target = c.gate;
  }
  if (has("--category-engine")) {
    if (!c.category) c.category = c.gate;
    c.category->engine = parse_engine(f.category_engine);
  }
  if (has("--target-engine")) {
    if (!c.target) c.target = c.gate;
    c.target->engine = parse_engine(f.target_engine);
  }
  for (auto* e : {&c.gate, c.category ? &*c.category : nullptr,
                  c.target ? &*c.target : nullptr}) {
    if (!e) continue;
    if (has("--gbdt-preset")) e->gbdt = GbdtConfig::from_preset(f.gbdt_preset);
    if (has("--lr-c")) e->logreg.C = f.lr_c;
    if (has("--lr-max-iterations")) e->logreg.max_iterations = f.lr_max_iterations;
    if (has("--n-trees")) e->gbdt.n_trees = f.n_trees;
    if (has("--max-depth")) e->gbdt.max_depth = f.max_depth;
  }
  c.validate();
  return c;
}

// Labelled or id/text-only, decided by the header.
Dataset load_any_dataset(const fs::path& path, bool strict, std::ostream& err) {
  std::ifstream in(path);
  std::string header;
  if (!in || !std::getline(in, header)) {
    throw DataError(path.string() + ": cannot read dataset");
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const bool labeled = header != "id\ttext";
  LoadResult r = load_dataset(path, {.labeled = labeled, .strict = strict});
  for (const auto& issue : r.issues) {
    err << "warning: " << io::location(path, issue.line) << ": " << issue.message
        << '\n';
  }
  return std::move(r.dataset);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

int cmd_stats(const std::vector<std::string>& data, bool lenient, std::ostream& out,
              std::ostream& err) {
  std::vector<std::pair<std::string, LabelCounts>> cols;
  for (const auto& p : data) {
    Dataset d = load_any_dataset(p, !lenient, err);
    cols.emplace_back(fs::path(p).stem().string(), label_distribution(d));
  }
  out << format_distribution(cols);
  return kExitOk;
}

int cmd_preprocess(const std::string& data, const std::string& resources,
                   const std::string& output, bool lenient, std::ostream& out,
                   std::ostream& err) {
  const Dataset d = load_any_dataset(data, !lenient, err);
  const Preprocessor pre(resources.empty() ? PreprocessConfig::load_default()
                                           : PreprocessConfig::load(resources));
  std::string text;
  for (const auto& t : d.tweets) {
    const TokenSequence s = pre(t.text, t.id);
    text += t.id + '\t';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) text += ' ';
      text += s.tokens[i];
    }
    text += '\n';
  }
  emit(output, text, out);
  return kExitOk;
}

struct FeaturizeFlags {
  std::string train, bundle, data, word_embeddings, resources, blocks = "tfidf",
                                                             output;
  std::vector<std::string> sentence_embeddings;
  bool lenient = false;
  int threads = 1;
};

int cmd_featurize(const FeaturizeFlags& f, std::ostream& out, std::ostream& err) {
  if (f.train.empty() == f.bundle.empty()) {
    throw UsageError("featurize needs exactly one of --train or --model");
  }
  const Parallelism par{f.threads};
  FeatureSpace space;
  PreprocessConfig pre_config;
  if (!f.bundle.empty()) {
    ModelBundle b = load_bundle(f.bundle);
    space = std::move(b.space);
    pre_config = std::move(b.preprocess);
  } else {
    pre_config = f.resources.empty() ? PreprocessConfig::load_default()
                                     : PreprocessConfig::load(f.resources);
    space.blocks = parse_blocks(f.blocks);
  }
  std::optional<WordEmbeddingTable> words;
  std::optional<SentenceEmbeddingStore> sentences;
  if (space.blocks.bowv) {
    if (f.word_embeddings.empty()) throw UsageError("bowv block needs --word-embeddings");
    words = WordEmbeddingTable::load(f.word_embeddings, {.strict = !f.lenient});
    space.word_dim = words->dim();
  }
  if (space.blocks.sentence) {
    if (f.sentence_embeddings.empty()) {
      throw UsageError("sentence block needs --sentence-embeddings");
    }
    std::vector<fs::path> paths(f.sentence_embeddings.begin(),
                                f.sentence_embeddings.end());
    sentences = SentenceEmbeddingStore::load_all(paths);
    space.sentence_dim = sentences->dim();
  }
  const Preprocessor pre(pre_config);
  if (!f.train.empty() && space.blocks.tfidf) {
    const Dataset train = load_any_dataset(f.train, !f.lenient, err);
    std::vector<TokenSequence> docs;
    for (const auto& t : train.tweets) docs.push_back(pre(t.text, t.id));
    space.vocabulary = TfidfVocabulary::fit(docs);
  }
  const Dataset data =
      load_any_dataset(f.data.empty() ? f.train : f.data, !f.lenient, err);
  std::vector<TokenSequence> docs;
  for (const auto& t : data.tweets) docs.push_back(pre(t.text, t.id));
  const auto x = featurize_all(docs, space, words ? &*words : nullptr,
                               sentences ? &*sentences : nullptr, par);

  std::string text = "# dimension " + std::to_string(space.dimension()) +
                     " fingerprint " + fingerprint_hex(space.fingerprint()) + '\n';
  for (const auto& b : space.layout()) {
    text += "# block " + b.name + " offset " + std::to_string(b.offset) + " length " +
            std::to_string(b.length) + '\n';
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    text += data.tweets[i].id + '\t';
    bool first = true;
    auto put = [&](std::size_t index, double v) {
      if (v == 0.0) return;
      if (!first) text += ' ';
      first = false;
      text += std::to_string(index) + ':' + io::format_double(v);
    };
    for (const auto& e : x[i].sparse()) put(e.index, e.value);
    for (std::size_t j = 0; j < x[i].dense().size(); ++j) {
      put(x[i].dense_offset() + j, x[i].dense()[j]);
    }
    text += '\n';
  }
  emit(f.output, text, out);
  return kExitOk;
}

void print_warnings(const RunInputs& in, std::ostream& err) {
  for (const auto& w : in.warnings) err << "warning: " << w << '\n';
}

int cmd_train(const CLI::App* app, const RunFlags& f, std::ostream& err) {
  RunConfig c = build_config(app, f);
  if (c.paths.model.empty()) throw UsageError("train needs --model");
  c.check_paths(false);
  const LoadResult train = load_dataset(c.paths.train, {.labeled = true, .strict = c.strict});
  for (const auto& issue : train.issues) {
    err << "warning: " << io::location(c.paths.train, issue.line) << ": "
        << issue.message << '\n';
  }
  RunInputs in;
  in.preprocess = c.paths.resources.empty() ? PreprocessConfig::load_default()
                                            : PreprocessConfig::load(c.paths.resources);
  if (c.blocks.bowv) {
    in.words = WordEmbeddingTable::load(c.paths.word_embeddings, {.strict = c.strict});
  }
  if (c.blocks.sentence) {
    in.sentences = SentenceEmbeddingStore::load_all(c.paths.sentence_embeddings);
  }
  const ModelBundle b = train_bundle(train.dataset, in.preprocess, train_options(c),
                                     in.sources(), Parallelism{c.threads});
  save_bundle(b, c.paths.model);
  return kExitOk;
}

struct PredictFlags {
  std::string model, data, output, probabilities, word_embeddings;
  std::vector<std::string> sentence_embeddings;
  bool lenient = false;
  int threads = 1;
};

int cmd_predict(const PredictFlags& f, std::ostream& out, std::ostream& err) {
  const ModelBundle b = load_bundle(f.model);
  const Dataset data = load_any_dataset(f.data, !f.lenient, err);
  std::optional<WordEmbeddingTable> words;
  std::optional<SentenceEmbeddingStore> sentences;
  if (b.space.blocks.bowv) {
    if (f.word_embeddings.empty()) {
      throw UsageError("model uses the bowv block; pass --word-embeddings");
    }
    words = WordEmbeddingTable::load(f.word_embeddings, {.strict = !f.lenient});
  }
  if (b.space.blocks.sentence) {
    if (f.sentence_embeddings.empty()) {
      throw UsageError("model uses the sentence block; pass --sentence-embeddings");
    }
    std::vector<fs::path> paths(f.sentence_embeddings.begin(),
                                f.sentence_embeddings.end());
    sentences = SentenceEmbeddingStore::load_all(paths);
  }
  const auto preds =
      predict_bundle(b, data, {words ? &*words : nullptr, sentences ? &*sentences : nullptr},
                     Parallelism{f.threads});
  emit(f.output, format_run_file(to_run_records(preds)), out);
  if (!f.probabilities.empty()) io::write_file(f.probabilities, format_probabilities(preds));
  return kExitOk;
}

int cmd_evaluate(const std::string& gold_path, const std::string& run_path,
                 const std::string& task, const std::string& variant,
                 const std::string& tsv, bool lenient, std::ostream& out,
                 std::ostream& err) {
  const Dataset gold = load_any_dataset(gold_path, !lenient, err);
  const auto run = load_predictions(run_path);
  const ScoreReport r = evaluate_run(gold, run, parse_task(task),
                                     parse_task_b_variant(variant));
  out << format_report(r);
  if (!tsv.empty()) io::write_file(tsv, format_report_tsv(r));
  return kExitOk;
}

int cmd_run(const CLI::App* app, const RunFlags& f, std::ostream& out,
            std::ostream& err) {
  const RunConfig c = build_config(app, f);
  const RunInputs in = load_run_inputs(c);
  print_warnings(in, err);
  const RunResult r = run(c, in);
  write_run_outputs(c, r);
  if (r.report) out << format_report(*r.report);
  if (c.paths.output.empty()) out << format_run_file(to_run_records(r.predictions));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Misogyny identification toolkit", "ami"};
  app.require_subcommand(1);

  std::vector<std::string> stats_data;
  bool stats_lenient = false;
  auto* stats = app.add_subcommand("stats", "label distribution table");
  stats->add_option("--data", stats_data, "dataset TSV (repeatable)")->required();
  stats->add_flag("--lenient", stats_lenient, "skip malformed rows");

  std::string pp_data, pp_resources, pp_output;
  bool pp_lenient = false;
  auto* prep = app.add_subcommand("preprocess", "write `id<TAB>tokens` per tweet");
  prep->add_option("--data", pp_data, "dataset TSV")->required();
  prep->add_option("--resources", pp_resources, "preprocessing resource directory");
  prep->add_option("--output", pp_output, "output file (default stdout)");
  prep->add_flag("--lenient", pp_lenient, "skip malformed rows");

  FeaturizeFlags ff;
  auto* feat = app.add_subcommand("featurize", "dump feature vectors");
  feat->add_option("--train", ff.train, "fit tf-idf on this TSV");
  feat->add_option("--model", ff.bundle, "use the feature space of a model bundle");
  feat->add_option("--data", ff.data, "TSV to featurize (default: --train)");
  feat->add_option("--blocks", ff.blocks, "comma list of tfidf,bowv,sentence");
  feat->add_option("--word-embeddings", ff.word_embeddings, "300-d word vectors");
  feat->add_option("--sentence-embeddings", ff.sentence_embeddings,
                   "512-d sentence embedding files");
  feat->add_option("--resources", ff.resources, "preprocessing resource directory");
  feat->add_option("--output", ff.output, "output file (default stdout)");
  feat->add_option("--threads", ff.threads, "worker threads, 0 for all cores");
  feat->add_flag("--lenient", ff.lenient, "skip malformed rows");

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "train a model bundle");
  add_run_flags(train, train_flags, false);

  PredictFlags pf;
  auto* predict = app.add_subcommand("predict", "write a run file from a model bundle");
  predict->add_option("--model", pf.model, "model bundle")->required();
  predict->add_option("--data", pf.data, "dataset TSV")->required();
  predict->add_option("--output", pf.output, "run file (default stdout)");
  predict->add_option("--probabilities", pf.probabilities, "probabilities TSV");
  predict->add_option("--word-embeddings", pf.word_embeddings, "300-d word vectors");
  predict->add_option("--sentence-embeddings", pf.sentence_embeddings,
                      "512-d sentence embedding files");
  predict->add_option("--threads", pf.threads, "worker threads, 0 for all cores");
  predict->add_flag("--lenient", pf.lenient, "skip malformed rows");

  std::string ev_gold, ev_run, ev_task = "A", ev_variant = "gold-misogynous", ev_tsv;
  bool ev_lenient = false;
  auto* evaluate = app.add_subcommand("evaluate", "score a run file");
  evaluate->add_option("--gold", ev_gold, "labelled TSV")->required();
  evaluate->add_option("--run", ev_run, "run file")->required();
  evaluate->add_option("--task", ev_task, "A or B");
  evaluate->add_option("--task-b-variant", ev_variant, "gold-misogynous or with-none");
  evaluate->add_option("--tsv", ev_tsv, "also write the report as TSV");
  evaluate->add_flag("--lenient", ev_lenient, "skip malformed rows");

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "train, predict and evaluate");
  add_run_flags(run_cmd, run_flags, true);

  if (!args.empty() && !args[0].starts_with('-') &&
      app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(stats_data, stats_lenient, out, err);
    if (prep->parsed()) {
      return cmd_preprocess(pp_data, pp_resources, pp_output, pp_lenient, out, err);
    }
    if (feat->parsed()) return cmd_featurize(ff, out, err);
    if (train->parsed()) return cmd_train(train, train_flags, err);
    if (predict->parsed()) return cmd_predict(pf, out, err);
    if (evaluate->parsed()) {
      return cmd_evaluate(ev_gold, ev_run, ev_task, ev_variant, ev_tsv, ev_lenient,
                          out, err);
    }
    if (run_cmd->parsed()) return cmd_run(run_cmd, run_flags, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ami::cli
