#include "ami/model_io.h"

#include "ami/errors.h"
#include "json_codec.h"
#include "text_io.h"

namespace ami {
namespace codec {

Json parse(std::string_view text, const std::string& source_name) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(source_name + ": parse error at byte " +
                          std::to_string(e.byte) + ": " + e.what(),
                      e.byte);
  }
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw DataError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

double get_double(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) throw DataError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

long long get_int(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) {
    throw DataError(std::string("field '") + name + "' must be an integer");
  }
  return v.get<long long>();
}

bool get_bool(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_boolean()) throw DataError(std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw DataError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

namespace {

std::vector<double> get_doubles(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw DataError(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw DataError(std::string("non-number in '") + name + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> get_strings(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw DataError(std::string("field '") + name + "' must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_string()) throw DataError(std::string("non-string in '") + name + "'");
    out.push_back(x.get<std::string>());
  }
  return out;
}

char32_t get_codepoint(const Json& v) {
  if (!v.is_number_unsigned() || v.get<unsigned long long>() > 0x10FFFF) {
    throw DataError("emoji range bound must be a codepoint");
  }
  return static_cast<char32_t>(v.get<unsigned long long>());
}

}  // namespace

Json to_json(const LogRegConfig& c) {
  return Json{{"C", c.C},
              {"max_iterations", c.max_iterations},
              {"tolerance", c.tolerance},
              {"fit_intercept", c.fit_intercept}};
}

LogRegConfig logreg_config_from_json(const Json& j) {
  LogRegConfig c;
  c.C = get_double(j, "C");
  c.max_iterations = static_cast<int>(get_int(j, "max_iterations"));
  c.tolerance = get_double(j, "tolerance");
  c.fit_intercept = get_bool(j, "fit_intercept");
  c.validate();
  return c;
}

Json to_json(const GbdtConfig& c) {
  return Json{{"preset", c.preset},
              {"objective", "binary:logistic"},
              {"scale_pos_weight", c.scale_pos_weight},
              {"reg_lambda", c.reg_lambda},
              {"eta", c.eta},
              {"max_depth", c.max_depth},
              {"n_trees", c.n_trees},
              {"min_child_hessian", c.min_child_hessian},
              {"base_score", c.base_score}};
}

GbdtConfig gbdt_config_from_json(const Json& j) {
  if (get_string(j, "objective") != "binary:logistic") {
    throw DataError("unsupported gbdt objective");
  }
  GbdtConfig c;
  c.preset = get_string(j, "preset");
  c.scale_pos_weight = get_double(j, "scale_pos_weight");
  c.reg_lambda = get_double(j, "reg_lambda");
  c.eta = get_double(j, "eta");
  c.max_depth = static_cast<int>(get_int(j, "max_depth"));
  c.n_trees = static_cast<int>(get_int(j, "n_trees"));
  c.min_child_hessian = get_double(j, "min_child_hessian");
  c.base_score = get_double(j, "base_score");
  c.validate();
  return c;
}

Json to_json(const LinearModel& m) {
  return Json{{"engine", "lr"},
              {"config", to_json(m.config)},
              {"fingerprint", fingerprint_hex(m.fingerprint)},
              {"bias", m.bias},
              {"weights", m.weights}};
}

LinearModel linear_model_from_json(const Json& j) {
  const std::string engine = get_string(j, "engine");
  if (engine != "lr") {
    throw EngineTypeError("expected an lr model, found engine '" + engine + "'");
  }
  LinearModel m;
  m.config = logreg_config_from_json(field(j, "config"));
  m.fingerprint = parse_fingerprint_hex(get_string(j, "fingerprint"));
  m.bias = get_double(j, "bias");
  m.weights = get_doubles(j, "weights");
  return m;
}

Json to_json(const GbdtModel& m) {
  Json trees = Json::array();
  for (const auto& tree : m.trees) {
    Json nodes = Json::array();
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) {
        nodes.push_back(Json::array({n.leaf}));
      } else {
        nodes.push_back(Json::array({n.feature, n.threshold, n.left, n.right}));
      }
    }
    trees.push_back(std::move(nodes));
  }
  return Json{{"engine", "gbdt"},
              {"config", to_json(m.config)},
              {"fingerprint", fingerprint_hex(m.fingerprint)},
              {"n_features", m.n_features},
              {"trees", std::move(trees)}};
}

GbdtModel gbdt_model_from_json(const Json& j) {
  const std::string engine = get_string(j, "engine");
  if (engine != "gbdt") {
    throw EngineTypeError("expected a gbdt model, found engine '" + engine + "'");
  }
  GbdtModel m;
  m.config = gbdt_config_from_json(field(j, "config"));
  m.fingerprint = parse_fingerprint_hex(get_string(j, "fingerprint"));
  m.n_features = static_cast<std::size_t>(get_int(j, "n_features"));
  const Json& trees = field(j, "trees");
  if (!trees.is_array()) throw DataError("'trees' must be an array");
  for (const auto& jt : trees) {
    RegressionTree tree;
    if (!jt.is_array() || jt.empty()) throw DataError("tree must be a non-empty array");
    for (const auto& jn : jt) {
      TreeNode n;
      if (jn.is_array() && jn.size() == 1 && jn[0].is_number()) {
        n.leaf = jn[0].get<double>();
      } else if (jn.is_array() && jn.size() == 4 && jn[0].is_number_integer() &&
                 jn[1].is_number() && jn[2].is_number_integer() &&
                 jn[3].is_number_integer()) {
        n.feature = jn[0].get<int>();
        n.threshold = jn[1].get<double>();
        n.left = jn[2].get<int>();
        n.right = jn[3].get<int>();
      } else {
        throw DataError("malformed tree node");
      }
      tree.nodes.push_back(n);
    }
    const int size = static_cast<int>(tree.nodes.size());
    for (int i = 0; i < size; ++i) {
      const auto& n = tree.nodes[static_cast<std::size_t>(i)];
      if (n.is_leaf()) continue;
      if (n.left <= i || n.right <= i || n.left >= size || n.right >= size ||
          n.feature >= static_cast<int>(m.n_features)) {
        throw DataError("tree node " + std::to_string(i) + " has bad links");
      }
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

Json to_json(const BinaryModel& m) {
  return std::visit([](const auto& model) { return to_json(model); }, m);
}

BinaryModel binary_model_from_json(const Json& j) {
  const std::string engine = get_string(j, "engine");
  if (engine == "lr") return linear_model_from_json(j);
  if (engine == "gbdt") return gbdt_model_from_json(j);
  throw EngineTypeError("expected a binary model, found engine '" + engine + "'");
}

Json to_json(const MulticlassModel& m) {
  Json subs = Json::array();
  for (const auto& s : m.submodels) subs.push_back(to_json(s));
  return Json{{"engine", "multiclass"},
              {"labels", m.labels},
              {"submodels", std::move(subs)}};
}

MulticlassModel multiclass_model_from_json(const Json& j) {
  const std::string engine = get_string(j, "engine");
  if (engine != "multiclass") {
    throw EngineTypeError("expected a multiclass model, found engine '" + engine + "'");
  }
  MulticlassModel m;
  m.labels = get_strings(j, "labels");
  const Json& subs = field(j, "submodels");
  if (!subs.is_array()) throw DataError("'submodels' must be an array");
  for (const auto& s : subs) m.submodels.push_back(binary_model_from_json(s));
  const std::size_t expected = m.labels.size() == 2 ? 1 : m.labels.size();
  if (m.labels.size() < 2 || m.submodels.size() != expected) {
    throw DataError("multiclass model has " + std::to_string(m.submodels.size()) +
                    " submodels for " + std::to_string(m.labels.size()) +
                    " labels");
  }
  auto fp = [](const BinaryModel& b) {
    return std::visit([](const auto& x) { return x.fingerprint; }, b);
  };
  for (const auto& s : m.submodels) {
    if (fp(s) != fp(m.submodels.front())) {
      throw DataError("multiclass submodels disagree on feature layout");
    }
  }
  return m;
}

Json to_json(const PreprocessConfig& c) {
  Json ranges = Json::array();
  for (const auto& r : c.emoji_ranges) {
    ranges.push_back(Json::array({static_cast<unsigned>(r.first),
                                  static_cast<unsigned>(r.last)}));
  }
  return Json{{"contractions", c.contractions},
              {"stopwords", c.stopwords},
              {"emoji_ranges", std::move(ranges)},
              {"stages",
               {{"remove_urls", c.stages.remove_urls},
                {"lowercase", c.stages.lowercase},
                {"expand_contractions", c.stages.expand_contractions},
                {"strip_emoji_and_punct", c.stages.strip_emoji_and_punct},
                {"remove_stopwords", c.stages.remove_stopwords},
                {"stem", c.stages.stem}}}};
}

PreprocessConfig preprocess_config_from_json(const Json& j) {
  PreprocessConfig c;
  const Json& contractions = field(j, "contractions");
  if (!contractions.is_object()) throw DataError("'contractions' must be an object");
  for (const auto& [k, v] : contractions.items()) {
    if (!v.is_string()) throw DataError("contraction values must be strings");
    c.contractions[k] = v.get<std::string>();
  }
  for (auto& w : get_strings(j, "stopwords")) c.stopwords.insert(std::move(w));
  const Json& ranges = field(j, "emoji_ranges");
  if (!ranges.is_array()) throw DataError("'emoji_ranges' must be an array");
  for (const auto& r : ranges) {
    if (!r.is_array() || r.size() != 2) throw DataError("emoji range must be [first, last]");
    c.emoji_ranges.push_back({get_codepoint(r[0]), get_codepoint(r[1])});
  }
  const Json& s = field(j, "stages");
  c.stages.remove_urls = get_bool(s, "remove_urls");
  c.stages.lowercase = get_bool(s, "lowercase");
  c.stages.expand_contractions = get_bool(s, "expand_contractions");
  c.stages.strip_emoji_and_punct = get_bool(s, "strip_emoji_and_punct");
  c.stages.remove_stopwords = get_bool(s, "remove_stopwords");
  c.stages.stem = get_bool(s, "stem");
  c.validate();
  return c;
}

Json to_json(const FeatureSpace& s) {
  Json blocks = Json::array();
  for (const auto& b : s.layout()) {
    blocks.push_back({{"name", b.name}, {"offset", b.offset}, {"length", b.length}});
  }
  return Json{{"layout", std::move(blocks)},
              {"word_dim", s.word_dim},
              {"sentence_dim", s.sentence_dim},
              {"fingerprint", fingerprint_hex(s.fingerprint())},
              {"vocabulary",
               {{"n_docs", s.vocabulary.n_docs()},
                {"terms", s.vocabulary.terms()},
                {"idf", s.vocabulary.idf()}}}};
}

FeatureSpace feature_space_from_json(const Json& j) {
  FeatureSpace s;
  s.blocks = {false, false, false};
  const Json& layout = field(j, "layout");
  if (!layout.is_array()) throw DataError("'layout' must be an array");
  for (const auto& b : layout) {
    const std::string name = get_string(b, "name");
    if (name == "tfidf") s.blocks.tfidf = true;
    else if (name == "bowv") s.blocks.bowv = true;
    else if (name == "sentence") s.blocks.sentence = true;
    else throw DataError("unknown feature block '" + name + "'");
  }
  s.word_dim = static_cast<std::size_t>(get_int(j, "word_dim"));
  s.sentence_dim = static_cast<std::size_t>(get_int(j, "sentence_dim"));
  const Json& v = field(j, "vocabulary");
  s.vocabulary = TfidfVocabulary::from_parts(
      get_strings(v, "terms"), get_doubles(v, "idf"),
      static_cast<std::size_t>(get_int(v, "n_docs")));
  if (s.layout() != [&] {
        std::vector<BlockLayout> stored;
        for (const auto& b : layout) {
          stored.push_back({get_string(b, "name"),
                            static_cast<std::size_t>(get_int(b, "offset")),
                            static_cast<std::size_t>(get_int(b, "length"))});
        }
        return stored;
      }()) {
    throw DataError("stored feature layout is inconsistent with its blocks");
  }
  if (fingerprint_hex(s.fingerprint()) != get_string(j, "fingerprint")) {
    throw DataError("stored feature fingerprint does not match the vocabulary");
  }
  return s;
}

}  // namespace codec

namespace {

constexpr const char* kModelFormat = "ami-model";

codec::Json model_body(const AnyModel& model) {
  return std::visit([](const auto& m) { return codec::to_json(m); }, model);
}

}  // namespace

std::string serialize_model(const AnyModel& model) {
  codec::Json j = model_body(model);
  j["format"] = kModelFormat;
  j["format_version"] = kModelFormatVersion;
  return j.dump(1) + "\n";
}

AnyModel parse_model(std::string_view text, const std::string& source_name) {
  const codec::Json j = codec::parse(text, source_name);
  try {
    if (codec::get_string(j, "format") != kModelFormat) {
      throw DataError("not an ami model file");
    }
    const long long version = codec::get_int(j, "format_version");
    if (version != kModelFormatVersion) {
      throw DataError("model format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    }
    const std::string engine = codec::get_string(j, "engine");
    if (engine == "lr") return codec::linear_model_from_json(j);
    if (engine == "gbdt") return codec::gbdt_model_from_json(j);
    if (engine == "multiclass") return codec::multiclass_model_from_json(j);
    throw DataError("unknown engine '" + engine + "'");
  } catch (const EngineTypeError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(source_name + ": " + e.what());
  }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  io::write_file(path, serialize_model(model));
}

AnyModel load_model(const std::filesystem::path& path) {
  return parse_model(io::read_file(path), path.string());
}

namespace {

template <typename T>
T load_typed(const std::filesystem::path& path, const char* expected) {
  AnyModel m = load_model(path);
  if (auto* typed = std::get_if<T>(&m)) return std::move(*typed);
  const char* found = std::holds_alternative<LinearModel>(m)   ? "lr"
                      : std::holds_alternative<GbdtModel>(m) ? "gbdt"
                                                             : "multiclass";
  throw EngineTypeError(path.string() + ": expected a " + expected +
                        " model, found engine '" + found + "'");
}

}  // namespace

LinearModel load_linear_model(const std::filesystem::path& path) {
  return load_typed<LinearModel>(path, "lr");
}

GbdtModel load_gbdt_model(const std::filesystem::path& path) {
  return load_typed<GbdtModel>(path, "gbdt");
}

MulticlassModel load_multiclass_model(const std::filesystem::path& path) {
  return load_typed<MulticlassModel>(path, "multiclass");
}

}  // namespace ami
