#include <gtest/gtest.h>

#include <random>

#include "ami/errors.h"
#include "ami/model_io.h"
#include "test_support.h"

namespace ami {
namespace {

using testing::TempDir;

constexpr std::size_t kDim = 12;

FeatureVector random_vector(std::mt19937_64& rng) {
  std::bernoulli_distribution keep(0.5);
  std::normal_distribution<double> g(0.0, 1.0);
  SparseBlock s;
  for (std::uint32_t j = 0; j < 6; ++j) {
    if (keep(rng)) s.push_back({j, g(rng)});
  }
  return FeatureVector({{"tfidf", 0, 6}, {"sentence", 6, 6}}, std::move(s),
                       testing::gaussian(rng, 6), 0xfeedULL);
}

struct Fixture {
  std::vector<FeatureVector> x;
  std::vector<int> y;
  std::vector<FeatureVector> probes;
};

Fixture make_fixture() {
  std::mt19937_64 rng(41);
  Fixture f;
  for (int i = 0; i < 120; ++i) {
    f.x.push_back(random_vector(rng));
    f.y.push_back(f.x.back().value_at(0) + f.x.back().value_at(7) > 0 ? 1 : 0);
  }
  for (int i = 0; i < 100; ++i) f.probes.push_back(random_vector(rng));
  return f;
}

template <typename M>
void expect_same_predictions(const M& a, const M& b, const Fixture& f) {
  for (const auto& x : f.probes) EXPECT_EQ(a.predict_proba(x), b.predict_proba(x));
}

TEST(ModelIo, LinearRoundTrip) {
  const Fixture f = make_fixture();
  const LinearModel m = train_logreg(f.x, f.y, {.C = 0.5});
  TempDir dir("io");
  save_model(m, dir / "lr.json");
  const LinearModel back = load_linear_model(dir / "lr.json");
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.bias, m.bias);
  EXPECT_EQ(back.fingerprint, m.fingerprint);
  EXPECT_EQ(back.config, m.config);
  expect_same_predictions(m, back, f);
  EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(ModelIo, GbdtRoundTrip) {
  const Fixture f = make_fixture();
  GbdtConfig c = GbdtConfig::from_preset("cb-like");
  c.n_trees = 12;
  const GbdtModel m = train_gbdt(f.x, f.y, c);
  TempDir dir("io");
  save_model(m, dir / "gbdt.json");
  const GbdtModel back = load_gbdt_model(dir / "gbdt.json");
  EXPECT_EQ(back.config, m.config);
  ASSERT_EQ(back.trees.size(), m.trees.size());
  for (std::size_t t = 0; t < m.trees.size(); ++t) EXPECT_EQ(back.trees[t].nodes, m.trees[t].nodes);
  expect_same_predictions(m, back, f);
  EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(ModelIo, MulticlassRoundTrip) {
  const Fixture f = make_fixture();
  std::vector<int> y3;
  for (const auto& x : f.x) y3.push_back(x.value_at(7) > 0.5 ? 2 : (x.value_at(8) > 0 ? 1 : 0));
  EngineConfig cfg{.engine = Engine::kGbdt};
  cfg.gbdt.n_trees = 5;
  const MulticlassModel m = train_multiclass(f.x, y3, {"a", "b", "c"}, cfg);
  TempDir dir("io");
  save_model(m, dir / "mc.json");
  const MulticlassModel back = load_multiclass_model(dir / "mc.json");
  EXPECT_EQ(back.labels, m.labels);
  expect_same_predictions(m, back, f);
}

TEST(ModelIo, TruncatedFileReportsByteOffset) {
  const Fixture f = make_fixture();
  const std::string text = serialize_model(train_logreg(f.x, f.y, {}));
  TempDir dir("io");
  const std::size_t cut = text.size() / 2;
  testing::write_text(dir / "cut.json", text.substr(0, cut));
  try {
    load_model(dir / "cut.json");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_GE(e.byte_offset(), cut - 1);
    EXPECT_LE(e.byte_offset(), cut + 1);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(ModelIo, WrongEngineType) {
  const Fixture f = make_fixture();
  GbdtConfig c;
  c.n_trees = 2;
  TempDir dir("io");
  save_model(train_gbdt(f.x, f.y, c), dir / "g.json");
  EXPECT_THROW(load_linear_model(dir / "g.json"), EngineTypeError);
  EXPECT_THROW(load_multiclass_model(dir / "g.json"), EngineTypeError);
  EXPECT_NO_THROW(load_gbdt_model(dir / "g.json"));
}

TEST(ModelIo, VersionMismatch) {
  const Fixture f = make_fixture();
  std::string text = serialize_model(train_logreg(f.x, f.y, {}));
  const std::string key = "\"format_version\": 1";
  const auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, key.size(), "\"format_version\": 2");
  try {
    parse_model(text);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("version 2"), std::string::npos) << e.what();
  }
}

TEST(ModelIo, SchemaErrors) {
  EXPECT_THROW(parse_model("{}"), DataError);
  EXPECT_THROW(parse_model("[1,2]"), DataError);
  EXPECT_THROW(parse_model(R"({"format":"ami-model","format_version":1,"engine":"lr"})"),
               DataError);
  const Fixture f = make_fixture();
  GbdtConfig c;
  c.n_trees = 1;
  std::string text = serialize_model(train_gbdt(f.x, f.y, c));
  // A child pointer past the end of the node list.
  const auto trees = text.find("\"trees\"");
  ASSERT_NE(trees, std::string::npos);
  try {
    parse_model(text.substr(0, trees) + "\"trees\": [[[0, 0.5, 1, 9], [0.1], [0.2]]]\n}");
    FAIL() << "expected DataError";
  } catch (const FormatError& e) {
    FAIL() << "document should parse: " << e.what();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos) << e.what();
  }
}

TEST(ModelIo, FingerprintMismatchAtPredict) {
  const Fixture f = make_fixture();
  const LinearModel m = train_logreg(f.x, f.y, {});
  TempDir dir("io");
  save_model(m, dir / "lr.json");
  const LinearModel back = load_linear_model(dir / "lr.json");
  const FeatureVector other({{"tfidf", 0, 6}, {"sentence", 6, 6}}, {}, std::vector<double>(6),
                            0xbeefULL);
  EXPECT_THROW(back.predict_proba(other), LayoutMismatchError);
}

}  // namespace
}  // namespace ami
