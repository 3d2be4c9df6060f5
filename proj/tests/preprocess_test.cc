#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ami/errors.h"
#include "ami/porter_stemmer.h"
#include "ami/preprocess.h"
#include "test_support.h"

namespace ami {
namespace {

using Tokens = std::vector<std::string>;

const PreprocessConfig& config() {
  static const PreprocessConfig c = PreprocessConfig::load_default();
  return c;
}

std::string strip(std::string_view s) {
  return strip_emoji_and_punct(s, config().emoji_ranges);
}

TEST(RemoveUrls, Examples) {
  EXPECT_EQ(remove_urls("check https://t.co/Ab1 out"), "check   out");
  EXPECT_EQ(remove_urls("no links here"), "no links here");
  EXPECT_EQ(remove_urls("www.example.com/x start"), "  start");
  EXPECT_EQ(remove_urls("HTTP://X.Y end"), "  end");
  EXPECT_EQ(remove_urls("awww.nope"), "awww.nope");
  EXPECT_EQ(remove_urls("a http://x"), "a  ");
}

TEST(Lowercase, Examples) {
  EXPECT_EQ(lowercase("GET Back"), "get back");
  EXPECT_EQ(lowercase("123 #MeToo"), "123 #metoo");
  EXPECT_EQ(lowercase("ÉCOLE ΣΟΦΊΑ"), "école σοφία");
}

TEST(Lowercase, Idempotent) {
  for (const char* s : {"MiXeD CaSe", "ÀÉÎ", "straße", "ΣΣ", "123"}) {
    const std::string once = lowercase(s);
    EXPECT_EQ(lowercase(once), once) << s;
  }
}

TEST(ExpandContractions, Examples) {
  const ContractionTable t(config().contractions);
  EXPECT_EQ(expand_contractions("ain't going", t), "is not going");
  EXPECT_EQ(expand_contractions("i'll see", t), "i will see");
  EXPECT_EQ(expand_contractions("skill", t), "skill");
  EXPECT_EQ(expand_contractions("you’re here", t), "you are here");
  EXPECT_EQ(expand_contractions("shell'll", t), "shell'll");
}

TEST(ExpandContractions, LongestKeyFirst) {
  const ContractionTable t({{"can't", "cannot"}, {"can't've", "cannot have"}});
  EXPECT_EQ(expand_contractions("can't've done", t), "cannot have done");
  EXPECT_EQ(expand_contractions("can't do", t), "cannot do");
}

TEST(StripEmojiAndPunct, Examples) {
  EXPECT_EQ(strip("you are 🙄 done!!!"), "you are  done   ");
  EXPECT_EQ(strip("@user #metoo"), " user  metoo");
  EXPECT_EQ(strip("plain words"), "plain words");
  EXPECT_EQ(strip("👍🏽ok"), "ok");
  EXPECT_EQ(strip("a–b"), "a b");
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("  get   back  "), (Tokens{"get", "back"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("a b c"), (Tokens{"a", "b", "c"}));
  EXPECT_EQ(tokenize("a b\tc\n"), (Tokens{"a", "b", "c"}));
}

TEST(RemoveStopwords, Examples) {
  EXPECT_EQ(remove_stopwords({"the", "kitchen"}, config().stopwords),
            Tokens{"kitchen"});
  EXPECT_EQ(remove_stopwords({}, config().stopwords), Tokens{});
}

TEST(Stem, Examples) {
  EXPECT_EQ(stem({"running"}), Tokens{"run"});
  EXPECT_EQ(stem({"ladies"}), Tokens{"ladi"});
  EXPECT_EQ(stem({"run"}), Tokens{"run"});
}

struct StemPair {
  std::string word;
  std::string stem;
};

std::vector<StemPair> reference_stems() {
  std::istringstream in(testing::read_text(testing::data_path("porter_reference.tsv")));
  std::vector<StemPair> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

TEST(Stem, MatchesReferenceTable) {
  const auto table = reference_stems();
  ASSERT_GT(table.size(), 8000u);
  std::size_t mismatches = 0;
  for (const auto& [word, expected] : table) {
    const std::string got = porter_stem(word);
    if (got != expected) {
      if (++mismatches <= 10) ADD_FAILURE() << word << ": " << got << " != " << expected;
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

// Classic Porter is not idempotent in general (agreed -> agre -> agr), so the
// fixed-point property is checked on the words where the reference is.
TEST(Stem, FixedPointWhereReferenceIsIdempotent) {
  std::map<std::string, std::string> ref;
  for (const auto& p : reference_stems()) ref[p.word] = p.stem;
  std::size_t checked = 0;
  for (const auto& [word, s] : ref) {
    auto it = ref.find(s);
    if (it == ref.end() || it->second != s) continue;
    EXPECT_EQ(porter_stem(s), s) << word;
    ++checked;
  }
  EXPECT_GT(checked, 1000u);
  EXPECT_EQ(porter_stem("agreed"), "agre");
  EXPECT_EQ(porter_stem("agre"), "agr");
}

TEST(Preprocess, EndToEndExample) {
  EXPECT_EQ(preprocess("I'll be BACK https://t.co/x 🙄", config()).tokens,
            Tokens{"back"});
  EXPECT_EQ(preprocess("", config()).tokens, Tokens{});
}

TEST(Preprocess, Deterministic) {
  const std::string s = "Women SHOULDN'T drive!! 😂 www.x.com #fail";
  EXPECT_EQ(preprocess(s, config(), "1"), preprocess(s, config(), "1"));
}

TEST(Preprocess, StageTogglesDisableStages) {
  PreprocessConfig c = config();
  c.stages = {false, false, false, false, false, false};
  EXPECT_EQ(preprocess("The CATS, https://x", c).tokens,
            (Tokens{"The", "CATS,", "https://x"}));
  c.stages.lowercase = true;
  c.stages.stem = true;
  EXPECT_EQ(preprocess("The CATS", c).tokens, (Tokens{"the", "cat"}));
}

// Re-running the pipeline on its joined output only re-applies stopword
// removal and stemming.
TEST(Preprocess, RerunOnOutputOnlyRestems) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> pool = {
      "Women", "can't", "DRIVE", "🙄", "https://t.co/z", "agreed", "ladies",
      "running", "#MeToo", "@user", "you're", "the", "kitchen", "!!", "hopefulness",
      "ÉCOLE", "don't", "relational"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int k = 0; k < 8; ++k) text += pool[pick(rng)] + " ";
    const Tokens once = preprocess(text, config()).tokens;
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    const Tokens twice = preprocess(joined, config()).tokens;
    EXPECT_EQ(twice, stem(remove_stopwords(once, config().stopwords))) << text;
  }
}

TEST(PreprocessConfig, DefaultDataIsValid) {
  EXPECT_NO_THROW(config().validate());
  EXPECT_EQ(config().stopwords.size(), 179u);
  EXPECT_EQ(config().contractions.at("ain't"), "is not");
  EXPECT_EQ(config().contractions.at("i'll"), "i will");
}

TEST(PreprocessConfig, RejectsBadRanges) {
  PreprocessConfig c = config();
  c.emoji_ranges = {{0x2000, 0x2100}, {0x2050, 0x2200}};
  EXPECT_THROW(c.validate(), DataError);
  testing::TempDir dir("ranges");
  testing::write_text(dir / "r.txt", "1F600-1F64F\nzz\n");
  EXPECT_THROW(load_emoji_ranges(dir / "r.txt"), DataError);
}

}  // namespace
}  // namespace ami
