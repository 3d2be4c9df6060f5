#include "ami/run_config.h"

#include <set>

#include "ami/errors.h"
#include "json_codec.h"
#include "text_io.h"

namespace ami {
namespace {

using codec::Json;

void check_keys(const Json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw UsageError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) {
      throw UsageError("unknown config key '" + where + "." + key + "'");
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return (base / path).lexically_normal();
}

void apply_paths(const Json& j, const std::filesystem::path& base, RunPaths& p) {
  check_keys(j, "paths",
             {"train", "test", "word_embeddings", "sentence_embeddings",
              "resources", "model", "output", "probabilities", "report"});
  auto single = [&](const char* key, std::filesystem::path& out) {
    if (j.contains(key)) out = resolve(base, codec::get_string(j, key));
  };
  single("train", p.train);
  single("test", p.test);
  single("word_embeddings", p.word_embeddings);
  single("resources", p.resources);
  single("model", p.model);
  single("output", p.output);
  single("probabilities", p.probabilities);
  single("report", p.report);
  if (j.contains("sentence_embeddings")) {
    const Json& s = j.at("sentence_embeddings");
    p.sentence_embeddings.clear();
    if (s.is_string()) {
      p.sentence_embeddings.push_back(resolve(base, s.get<std::string>()));
    } else if (s.is_array()) {
      for (const auto& e : s) {
        if (!e.is_string()) throw UsageError("paths.sentence_embeddings must hold strings");
        p.sentence_embeddings.push_back(resolve(base, e.get<std::string>()));
      }
    } else {
      throw UsageError("paths.sentence_embeddings must be a string or a list");
    }
  }
}

void apply_lr(const Json& j, LogRegConfig& c) {
  check_keys(j, "lr", {"C", "max_iterations", "tolerance", "fit_intercept"});
  if (j.contains("C")) c.C = codec::get_double(j, "C");
  if (j.contains("max_iterations")) {
    c.max_iterations = static_cast<int>(codec::get_int(j, "max_iterations"));
  }
  if (j.contains("tolerance")) c.tolerance = codec::get_double(j, "tolerance");
  if (j.contains("fit_intercept")) c.fit_intercept = codec::get_bool(j, "fit_intercept");
}

void apply_gbdt(const Json& j, GbdtConfig& c) {
  check_keys(j, "gbdt",
             {"preset", "scale_pos_weight", "reg_lambda", "eta", "max_depth",
              "n_trees", "min_child_hessian", "base_score"});
  if (j.contains("preset")) c = GbdtConfig::from_preset(codec::get_string(j, "preset"));
  if (j.contains("scale_pos_weight")) c.scale_pos_weight = codec::get_double(j, "scale_pos_weight");
  if (j.contains("reg_lambda")) c.reg_lambda = codec::get_double(j, "reg_lambda");
  if (j.contains("eta")) c.eta = codec::get_double(j, "eta");
  if (j.contains("max_depth")) c.max_depth = static_cast<int>(codec::get_int(j, "max_depth"));
  if (j.contains("n_trees")) c.n_trees = static_cast<int>(codec::get_int(j, "n_trees"));
  if (j.contains("min_child_hessian")) c.min_child_hessian = codec::get_double(j, "min_child_hessian");
  if (j.contains("base_score")) c.base_score = codec::get_double(j, "base_score");
}

void apply_engines(const Json& j, RunConfig& c) {
  if (j.is_string()) {
    const Engine e = parse_engine(j.get<std::string>());
    c.gate.engine = e;
    if (c.category) c.category->engine = e;
    if (c.target) c.target->engine = e;
    return;
  }
  check_keys(j, "engine", {"gate", "category", "target"});
  if (j.contains("gate")) c.gate.engine = parse_engine(codec::get_string(j, "gate"));
  if (j.contains("category")) {
    if (!c.category) c.category = c.gate;
    c.category->engine = parse_engine(codec::get_string(j, "category"));
  }
  if (j.contains("target")) {
    if (!c.target) c.target = c.gate;
    c.target->engine = parse_engine(codec::get_string(j, "target"));
  }
}

std::string path_string(const std::filesystem::path& p) { return p.generic_string(); }

}  // namespace

void RunConfig::validate() const {
  if (!blocks.any()) throw UsageError("at least one feature block must be enabled");
  if (task == Task::kB && (!category || !target)) {
    throw UsageError("task B needs category and target engines");
  }
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
    throw UsageError("holdout_fraction must lie in [0, 1)");
  }
  if (threads < 0) throw UsageError("threads must be >= 0");
  try {
    gate.logreg.validate();
    gate.gbdt.validate();
    for (const auto* e : {&category, &target}) {
      if (*e) {
        (*e)->logreg.validate();
        (*e)->gbdt.validate();
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void RunConfig::check_paths(bool need_test) const {
  auto require = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw UsageError(std::string("no ") + what + " path given");
    if (!std::filesystem::exists(p)) {
      throw UsageError(std::string(what) + " file not found: " + p.string());
    }
  };
  require(paths.train, "train");
  if (need_test && holdout_fraction == 0.0) require(paths.test, "test");
  if (blocks.bowv) require(paths.word_embeddings, "word embedding");
  if (blocks.sentence) {
    if (paths.sentence_embeddings.empty()) {
      throw UsageError("sentence block enabled but no sentence embedding files given");
    }
    for (const auto& p : paths.sentence_embeddings) require(p, "sentence embedding");
  }
  if (!paths.resources.empty() && !std::filesystem::is_directory(paths.resources)) {
    throw UsageError("resource directory not found: " + paths.resources.string());
  }
}

void apply_config_json(std::string_view text, const std::filesystem::path& base_dir,
                       RunConfig& c) {
  try {
    const Json j = codec::parse(text, "config");
    check_keys(j, "config",
               {"task", "paths", "blocks", "engine", "lr", "gbdt", "task_b_variant",
                "strict", "holdout_fraction", "seed", "threads"});
    if (j.contains("task")) c.task = parse_task(codec::get_string(j, "task"));
    if (j.contains("paths")) apply_paths(j.at("paths"), base_dir, c.paths);
    if (j.contains("blocks")) {
      const Json& b = j.at("blocks");
      check_keys(b, "blocks", {"tfidf", "bowv", "sentence"});
      if (b.contains("tfidf")) c.blocks.tfidf = codec::get_bool(b, "tfidf");
      if (b.contains("bowv")) c.blocks.bowv = codec::get_bool(b, "bowv");
      if (b.contains("sentence")) c.blocks.sentence = codec::get_bool(b, "sentence");
    }
    if (j.contains("engine")) apply_engines(j.at("engine"), c);
    for (auto* e : {&c.gate, c.category ? &*c.category : nullptr,
                    c.target ? &*c.target : nullptr}) {
      if (!e) continue;
      if (j.contains("lr")) apply_lr(j.at("lr"), e->logreg);
      if (j.contains("gbdt")) apply_gbdt(j.at("gbdt"), e->gbdt);
    }
    if (j.contains("task_b_variant")) {
      c.task_b_variant = parse_task_b_variant(codec::get_string(j, "task_b_variant"));
    }
    if (j.contains("strict")) c.strict = codec::get_bool(j, "strict");
    if (j.contains("holdout_fraction")) {
      c.holdout_fraction = codec::get_double(j, "holdout_fraction");
    }
    if (j.contains("seed")) {
      const long long s = codec::get_int(j, "seed");
      if (s < 0) throw UsageError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("threads")) c.threads = static_cast<int>(codec::get_int(j, "threads"));
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig defaults) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  apply_config_json(text, path.parent_path(), defaults);
  return defaults;
}

std::string format_run_config(const RunConfig& c) {
  auto engine_json = [](const EngineConfig& e) {
    return Json{{"engine", to_string(e.engine)},
                {"lr", codec::to_json(e.logreg)},
                {"gbdt", codec::to_json(e.gbdt)}};
  };
  Json sentence = Json::array();
  for (const auto& p : c.paths.sentence_embeddings) sentence.push_back(path_string(p));
  Json j{{"task", to_string(c.task)},
         {"paths",
          {{"train", path_string(c.paths.train)},
           {"test", path_string(c.paths.test)},
           {"word_embeddings", path_string(c.paths.word_embeddings)},
           {"sentence_embeddings", sentence},
           {"resources", path_string(c.paths.resources)},
           {"model", path_string(c.paths.model)},
           {"output", path_string(c.paths.output)},
           {"probabilities", path_string(c.paths.probabilities)},
           {"report", path_string(c.paths.report)}}},
         {"blocks",
          {{"tfidf", c.blocks.tfidf}, {"bowv", c.blocks.bowv}, {"sentence", c.blocks.sentence}}},
         {"gate", engine_json(c.gate)},
         {"task_b_variant", to_string(c.task_b_variant)},
         {"strict", c.strict},
         {"holdout_fraction", c.holdout_fraction},
         {"seed", c.seed},
         {"threads", c.threads}};
  if (c.category) j["category"] = engine_json(*c.category);
  if (c.target) j["target"] = engine_json(*c.target);
  return j.dump(2) + "\n";
}

}  // namespace ami
