#ifndef AMI_PREPROCESS_H_
#define AMI_PREPROCESS_H_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ami {

struct CodepointRange {
  char32_t first = 0;
  char32_t last = 0;

  bool contains(char32_t cp) const { return cp >= first && cp <= last; }
  bool operator==(const CodepointRange&) const = default;
};

// Tokenization always runs; the other six stages can be switched off.
struct StageToggles {
  bool remove_urls = true;
  bool lowercase = true;
  bool expand_contractions = true;
  bool strip_emoji_and_punct = true;
  bool remove_stopwords = true;
  bool stem = true;

  bool operator==(const StageToggles&) const = default;
};

struct PreprocessConfig {
  std::map<std::string, std::string> contractions;
  std::set<std::string> stopwords;
  std::vector<CodepointRange> emoji_ranges;
  StageToggles stages;

  // Throws DataError when keys are not lowercase, the stopword list is empty,
  // or the ranges are unsorted or overlapping.
  void validate() const;

  // Reads contractions.tsv, stopwords_en.txt and emoji_ranges.txt.
  static PreprocessConfig load(const std::filesystem::path& dir);
  // The data directory shipped with the library.
  static PreprocessConfig load_default();

  bool operator==(const PreprocessConfig&) const = default;
};

std::map<std::string, std::string> load_contractions(
    const std::filesystem::path& path);
std::set<std::string> load_stopwords(const std::filesystem::path& path);
// One `HEX` or `HEX-HEX` interval per line; `#` starts a comment.
std::vector<CodepointRange> load_emoji_ranges(const std::filesystem::path& path);

// Whole-word replacement with longest keys tried first. Keys and values are
// matched as codepoint sequences.
class ContractionTable {
 public:
  ContractionTable() = default;
  explicit ContractionTable(const std::map<std::string, std::string>& table);

  std::string expand(std::string_view text) const;

 private:
  struct Entry {
    std::u32string key;
    std::u32string value;
  };
  std::vector<Entry> entries_;  // longest key first
};

struct TokenSequence {
  std::string source_id;
  std::vector<std::string> tokens;

  bool operator==(const TokenSequence&) const = default;
};

// http://, https:// or www. (case-insensitive, not preceded by an ASCII
// alphanumeric) up to the next whitespace becomes a single space.
std::string remove_urls(std::string_view text);
std::string lowercase(std::string_view text);
std::string expand_contractions(std::string_view text,
                                const ContractionTable& table);
// Emoji codepoints are deleted; other punctuation and symbol codepoints each
// become one space.
std::string strip_emoji_and_punct(std::string_view text,
                                  std::span<const CodepointRange> emoji_ranges);
std::vector<std::string> tokenize(std::string_view text);
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const std::set<std::string>& stopwords);
std::vector<std::string> stem(std::vector<std::string> tokens);

// The full pipeline with the contraction table compiled once.
class Preprocessor {
 public:
  explicit Preprocessor(PreprocessConfig config);

  TokenSequence operator()(std::string_view text,
                           std::string source_id = {}) const;
  const PreprocessConfig& config() const { return config_; }

 private:
  PreprocessConfig config_;
  ContractionTable contractions_;
};

TokenSequence preprocess(std::string_view text, const PreprocessConfig& config,
                         std::string source_id = {});

}  // namespace ami

#endif  // AMI_PREPROCESS_H_
