#ifndef AMI_FEATURES_H_
#define AMI_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ami/parallel.h"
#include "ami/preprocess.h"

namespace ami {

inline constexpr std::size_t kWordEmbeddingDim = 300;
inline constexpr std::size_t kSentenceEmbeddingDim = 512;

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};
// Sorted by index, no duplicates.
using SparseBlock = std::vector<SparseEntry>;

// Unigram vocabulary with smooth idf: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
// Terms are indexed in lexicographic byte order.
class TfidfVocabulary {
 public:
  TfidfVocabulary() = default;
  // Throws DataError on an empty corpus.
  static TfidfVocabulary fit(std::span<const TokenSequence> corpus);
  // Rebuilds a fitted vocabulary (model loading). terms must be sorted and
  // unique, idf positive.
  static TfidfVocabulary from_parts(std::vector<std::string> terms,
                                    std::vector<double> idf,
                                    std::size_t n_docs);

  // Raw count times idf, then L2-normalised unless all zero. OOV tokens are
  // ignored.
  SparseBlock transform(std::span<const std::string> tokens) const;

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::optional<std::uint32_t> index_of(std::string_view term) const;

 private:
  void build_index();

  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct EmbeddingLoadOptions {
  bool strict = true;
};

// GloVe-style text file: `word v1 ... v300` per line.
class WordEmbeddingTable {
 public:
  explicit WordEmbeddingTable(std::size_t dim = kWordEmbeddingDim) : dim_(dim) {}

  // Lines with the wrong number of values raise DataError in strict mode and
  // are skipped (and counted) in lenient mode. Duplicate words: last wins,
  // counted as a warning.
  static WordEmbeddingTable load(const std::filesystem::path& path,
                                 const EmbeddingLoadOptions& options = {},
                                 std::size_t dim = kWordEmbeddingDim);

  void add(std::string word, std::vector<double> vector);
  const std::vector<double>* find(std::string_view word) const;

  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t skipped_lines() const { return skipped_lines_; }
  std::size_t duplicate_words() const { return duplicate_words_; }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t skipped_lines_ = 0;
  std::size_t duplicate_words_ = 0;
};

// Component-wise mean over tokens present in the table; zeros if none are.
std::vector<double> bowv(const WordEmbeddingTable& table,
                         std::span<const std::string> tokens);

// File: header `dim<TAB>512`, then `tweet_id<TAB>f1 f2 ... f512` per line.
class SentenceEmbeddingStore {
 public:
  explicit SentenceEmbeddingStore(std::size_t dim = kSentenceEmbeddingDim)
      : dim_(dim) {}

  // Throws DataError on header/dim mismatch, duplicate id, or bad value.
  static SentenceEmbeddingStore load(const std::filesystem::path& path,
                                     std::size_t dim = kSentenceEmbeddingDim);
  // Merges several files; ids must be unique across them.
  static SentenceEmbeddingStore load_all(
      std::span<const std::filesystem::path> paths,
      std::size_t dim = kSentenceEmbeddingDim);

  void add(std::string id, std::vector<double> vector);
  // Throws DataError naming the id when it is missing.
  const std::vector<double>& at(const std::string& id) const;
  bool contains(const std::string& id) const { return vectors_.contains(id); }

  // Writes in file order of insertion.
  std::string format() const;
  void write(const std::filesystem::path& path) const;

  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct EnabledBlocks {
  bool tfidf = true;
  bool bowv = true;
  bool sentence = true;

  bool any() const { return tfidf || bowv || sentence; }
  bool operator==(const EnabledBlocks&) const = default;
};

struct BlockLayout {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;

  bool operator==(const BlockLayout&) const = default;
};

// One tweet's concatenated [tfidf | bowv | sentence] vector. The tfidf block is
// stored sparse (indices local to the block, which always sits at offset 0);
// the remaining blocks are one dense payload starting at dense_offset().
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(std::vector<BlockLayout> layout, SparseBlock sparse,
                std::vector<double> dense, std::uint64_t fingerprint);

  std::size_t size() const { return size_; }
  const std::vector<BlockLayout>& layout() const { return layout_; }
  const SparseBlock& sparse() const { return sparse_; }
  const std::vector<double>& dense() const { return dense_; }
  std::size_t dense_offset() const { return dense_offset_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

  double value_at(std::size_t index) const;
  double dot(std::span<const double> weights) const;
  // out += scale * x
  void add_scaled_to(double scale, std::span<double> out) const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<BlockLayout> layout_;
  SparseBlock sparse_;
  std::vector<double> dense_;
  std::size_t dense_offset_ = 0;
  std::size_t size_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// Fitted feature space: which blocks are on and the tfidf vocabulary.
struct FeatureSpace {
  EnabledBlocks blocks;
  TfidfVocabulary vocabulary;
  std::size_t word_dim = kWordEmbeddingDim;
  std::size_t sentence_dim = kSentenceEmbeddingDim;

  std::vector<BlockLayout> layout() const;
  std::size_t dimension() const;
  // FNV-1a over the layout and the vocabulary terms.
  std::uint64_t fingerprint() const;
};

std::string fingerprint_hex(std::uint64_t fingerprint);
std::uint64_t parse_fingerprint_hex(std::string_view hex);

// Blocks are placed in the fixed order tfidf, bowv, sentence. The word table
// and sentence store are only consulted for enabled blocks; a null pointer for
// an enabled block is a DataError.
FeatureVector featurize(std::span<const std::string> tokens,
                        const std::string& tweet_id, const FeatureSpace& space,
                        const WordEmbeddingTable* word_table,
                        const SentenceEmbeddingStore* sentence_store);

// Featurizes a batch in parallel; layout and fingerprint are computed once.
std::vector<FeatureVector> featurize_all(
    std::span<const TokenSequence> docs, const FeatureSpace& space,
    const WordEmbeddingTable* word_table,
    const SentenceEmbeddingStore* sentence_store, const Parallelism& par = {});

FeatureVector featurize(std::span<const std::string> tokens,
                        const std::string& tweet_id,
                        const TfidfVocabulary& vocab,
                        const WordEmbeddingTable* word_table,
                        const SentenceEmbeddingStore* sentence_store,
                        const EnabledBlocks& enabled);

}  // namespace ami

#endif  // AMI_FEATURES_H_
