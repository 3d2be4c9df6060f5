#include "ami/features.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "ami/errors.h"
#include "text_io.h"

namespace ami {

TfidfVocabulary TfidfVocabulary::fit(std::span<const TokenSequence> corpus) {
  if (corpus.empty()) throw DataError("cannot fit tf-idf on an empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    std::set<std::string_view> distinct(doc.tokens.begin(), doc.tokens.end());
    for (auto t : distinct) ++df[std::string(t)];
  }
  TfidfVocabulary v;
  v.n_docs_ = corpus.size();
  const double n = static_cast<double>(corpus.size());
  for (auto& [term, count] : df) {
    v.terms_.push_back(term);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) +
                     1.0);
  }
  v.build_index();
  return v;
}

TfidfVocabulary TfidfVocabulary::from_parts(std::vector<std::string> terms,
                                            std::vector<double> idf,
                                            std::size_t n_docs) {
  if (terms.size() != idf.size()) {
    throw DataError("vocabulary terms and idf differ in length");
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && !(terms[i - 1] < terms[i])) {
      throw DataError("vocabulary terms must be sorted and unique");
    }
    if (!(idf[i] > 0.0) || !std::isfinite(idf[i])) {
      throw DataError("idf must be positive for term '" + terms[i] + "'");
    }
  }
  TfidfVocabulary v;
  v.terms_ = std::move(terms);
  v.idf_ = std::move(idf);
  v.n_docs_ = n_docs;
  v.build_index();
  return v;
}

void TfidfVocabulary::build_index() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> TfidfVocabulary::index_of(
    std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseBlock TfidfVocabulary::transform(
    std::span<const std::string> tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    if (auto idx = index_of(t)) counts[*idx] += 1.0;
  }
  SparseBlock block;
  block.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [idx, count] : counts) {
    const double v = count * idf_[idx];
    block.push_back({idx, v});
    sq += v * v;
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& e : block) e.value /= norm;
  }
  return block;
}

WordEmbeddingTable WordEmbeddingTable::load(const std::filesystem::path& path,
                                            const EmbeddingLoadOptions& options,
                                            std::size_t dim) {
  WordEmbeddingTable table(dim);
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = io::split_ws(lines[n]);
    auto fail = [&](const std::string& msg) {
      if (options.strict) {
        throw DataError(io::location(path, n + 1) + ": " + msg);
      }
      ++table.skipped_lines_;
    };
    if (fields.size() != dim + 1) {
      fail("expected " + std::to_string(dim) + " values, found " +
           std::to_string(fields.empty() ? 0 : fields.size() - 1));
      continue;
    }
    std::vector<double> vec(dim);
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i) {
      auto v = io::parse_double(fields[i + 1]);
      if (!v) {
        ok = false;
        break;
      }
      vec[i] = *v;
    }
    if (!ok) {
      fail("non-numeric value");
      continue;
    }
    table.add(std::string(fields[0]), std::move(vec));
  }
  return table;
}

void WordEmbeddingTable::add(std::string word, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw DataError("embedding for '" + word + "' has dimension " +
                    std::to_string(vector.size()) + ", expected " +
                    std::to_string(dim_));
  }
  auto [it, inserted] = vectors_.insert_or_assign(std::move(word), std::move(vector));
  if (!inserted) ++duplicate_words_;
}

const std::vector<double>* WordEmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<double> bowv(const WordEmbeddingTable& table,
                         std::span<const std::string> tokens) {
  std::vector<double> mean(table.dim(), 0.0);
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    const auto* v = table.find(t);
    if (!v) continue;
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
    ++hits;
  }
  if (hits > 0) {
    for (auto& x : mean) x /= static_cast<double>(hits);
  }
  return mean;
}

SentenceEmbeddingStore SentenceEmbeddingStore::load(
    const std::filesystem::path& path, std::size_t dim) {
  SentenceEmbeddingStore store(dim);
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  const std::string expected_header = "dim\t" + std::to_string(dim);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  if (lines.front() != expected_header) {
    throw DataError(io::location(path, 1) + ": dimension header '" +
                    std::string(lines.front()) + "' does not match '" +
                    expected_header + "'");
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto where = io::location(path, n + 1);
    const auto tab = lines[n].find('\t');
    if (tab == std::string_view::npos) throw DataError(where + ": missing tab");
    std::string id(lines[n].substr(0, tab));
    const auto values = io::split(lines[n].substr(tab + 1), ' ');
    if (values.size() != dim) {
      throw DataError(where + ": expected " + std::to_string(dim) +
                      " values, found " + std::to_string(values.size()));
    }
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      auto v = io::parse_double(values[i]);
      if (!v) {
        throw DataError(where + ": non-numeric value '" +
                        std::string(values[i]) + "'");
      }
      vec[i] = *v;
    }
    if (store.contains(id)) throw DataError(where + ": duplicate id '" + id + "'");
    store.add(std::move(id), std::move(vec));
  }
  return store;
}

SentenceEmbeddingStore SentenceEmbeddingStore::load_all(
    std::span<const std::filesystem::path> paths, std::size_t dim) {
  SentenceEmbeddingStore merged(dim);
  for (const auto& p : paths) {
    SentenceEmbeddingStore part = load(p, dim);
    for (const auto& id : part.order_) {
      if (merged.contains(id)) {
        throw DataError(p.string() + ": id '" + id + "' already loaded");
      }
      merged.add(id, part.vectors_.at(id));
    }
  }
  return merged;
}

void SentenceEmbeddingStore::add(std::string id, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw DataError("sentence embedding for '" + id + "' has dimension " +
                    std::to_string(vector.size()));
  }
  if (!vectors_.contains(id)) order_.push_back(id);
  vectors_.insert_or_assign(std::move(id), std::move(vector));
}

const std::vector<double>& SentenceEmbeddingStore::at(const std::string& id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end()) {
    throw DataError("no sentence embedding for tweet '" + id + "'");
  }
  return it->second;
}

std::string SentenceEmbeddingStore::format() const {
  std::string out = "dim\t" + std::to_string(dim_) + "\n";
  for (const auto& id : order_) {
    out += id;
    out += '\t';
    const auto& v = vectors_.at(id);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ' ';
      out += io::format_double(v[i]);
    }
    out += '\n';
  }
  return out;
}

void SentenceEmbeddingStore::write(const std::filesystem::path& path) const {
  io::write_file(path, format());
}

FeatureVector::FeatureVector(std::vector<BlockLayout> layout, SparseBlock sparse,
                             std::vector<double> dense,
                             std::uint64_t fingerprint)
    : layout_(std::move(layout)),
      sparse_(std::move(sparse)),
      dense_(std::move(dense)),
      fingerprint_(fingerprint) {
  for (const auto& b : layout_) size_ = std::max(size_, b.offset + b.length);
  dense_offset_ = size_ - dense_.size();
}

double FeatureVector::value_at(std::size_t index) const {
  if (index >= dense_offset_) return dense_[index - dense_offset_];
  auto it = std::lower_bound(
      sparse_.begin(), sparse_.end(), index,
      [](const SparseEntry& e, std::size_t i) { return e.index < i; });
  return (it != sparse_.end() && it->index == index) ? it->value : 0.0;
}

double FeatureVector::dot(std::span<const double> weights) const {
  double s = 0.0;
  for (const auto& e : sparse_) s += weights[e.index] * e.value;
  const double* w = weights.data() + dense_offset_;
  for (std::size_t i = 0; i < dense_.size(); ++i) s += w[i] * dense_[i];
  return s;
}

void FeatureVector::add_scaled_to(double scale, std::span<double> out) const {
  for (const auto& e : sparse_) out[e.index] += scale * e.value;
  double* o = out.data() + dense_offset_;
  for (std::size_t i = 0; i < dense_.size(); ++i) o[i] += scale * dense_[i];
}

std::vector<BlockLayout> FeatureSpace::layout() const {
  std::vector<BlockLayout> layout;
  std::size_t offset = 0;
  auto push = [&](const char* name, std::size_t length) {
    layout.push_back({name, offset, length});
    offset += length;
  };
  if (blocks.tfidf) push("tfidf", vocabulary.size());
  if (blocks.bowv) push("bowv", word_dim);
  if (blocks.sentence) push("sentence", sentence_dim);
  return layout;
}

std::size_t FeatureSpace::dimension() const {
  std::size_t n = 0;
  for (const auto& b : layout()) n += b.length;
  return n;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
};

}  // namespace

std::uint64_t FeatureSpace::fingerprint() const {
  Fnv1a f;
  for (const auto& b : layout()) {
    f.add(b.name);
    f.add(":");
    f.add(std::to_string(b.offset));
    f.add("+");
    f.add(std::to_string(b.length));
    f.add(";");
  }
  if (blocks.tfidf) {
    for (const auto& t : vocabulary.terms()) {
      f.add(t);
      f.add("\n");
    }
  }
  return f.h;
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fingerprint));
  return buf;
}

std::uint64_t parse_fingerprint_hex(std::string_view hex) {
  if (hex.size() != 16) throw DataError("fingerprint must be 16 hex digits");
  std::uint64_t v = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else throw DataError("bad fingerprint '" + std::string(hex) + "'");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

namespace {

void check_sources(const FeatureSpace& space, const WordEmbeddingTable* word_table,
                   const SentenceEmbeddingStore* sentence_store) {
  if (!space.blocks.any()) throw DataError("no feature block enabled");
  if (space.blocks.bowv) {
    if (!word_table) throw DataError("bowv block enabled without word embeddings");
    if (word_table->dim() != space.word_dim) {
      throw DataError("word embedding dimension does not match the feature space");
    }
  }
  if (space.blocks.sentence) {
    if (!sentence_store) {
      throw DataError("sentence block enabled without sentence embeddings");
    }
    if (sentence_store->dim() != space.sentence_dim) {
      throw DataError(
          "sentence embedding dimension does not match the feature space");
    }
  }
}

FeatureVector featurize_checked(std::span<const std::string> tokens,
                                const std::string& tweet_id,
                                const FeatureSpace& space,
                                const std::vector<BlockLayout>& layout,
                                std::uint64_t fingerprint,
                                const WordEmbeddingTable* word_table,
                                const SentenceEmbeddingStore* sentence_store) {
  SparseBlock sparse;
  std::vector<double> dense;
  if (space.blocks.tfidf) sparse = space.vocabulary.transform(tokens);
  if (space.blocks.bowv) {
    auto v = bowv(*word_table, tokens);
    dense.insert(dense.end(), v.begin(), v.end());
  }
  if (space.blocks.sentence) {
    const auto& v = sentence_store->at(tweet_id);
    dense.insert(dense.end(), v.begin(), v.end());
  }
  return FeatureVector(layout, std::move(sparse), std::move(dense), fingerprint);
}

}  // namespace

FeatureVector featurize(std::span<const std::string> tokens,
                        const std::string& tweet_id, const FeatureSpace& space,
                        const WordEmbeddingTable* word_table,
                        const SentenceEmbeddingStore* sentence_store) {
  check_sources(space, word_table, sentence_store);
  return featurize_checked(tokens, tweet_id, space, space.layout(),
                           space.fingerprint(), word_table, sentence_store);
}

std::vector<FeatureVector> featurize_all(
    std::span<const TokenSequence> docs, const FeatureSpace& space,
    const WordEmbeddingTable* word_table,
    const SentenceEmbeddingStore* sentence_store, const Parallelism& par) {
  check_sources(space, word_table, sentence_store);
  const auto layout = space.layout();
  const auto fingerprint = space.fingerprint();
  std::vector<FeatureVector> out(docs.size());
  parallel_for(docs.size(), par, [&](std::size_t i) {
    out[i] = featurize_checked(docs[i].tokens, docs[i].source_id, space, layout,
                               fingerprint, word_table, sentence_store);
  });
  return out;
}

FeatureVector featurize(std::span<const std::string> tokens,
                        const std::string& tweet_id,
                        const TfidfVocabulary& vocab,
                        const WordEmbeddingTable* word_table,
                        const SentenceEmbeddingStore* sentence_store,
                        const EnabledBlocks& enabled) {
  FeatureSpace space;
  space.blocks = enabled;
  space.vocabulary = vocab;
  if (word_table) space.word_dim = word_table->dim();
  if (sentence_store) space.sentence_dim = sentence_store->dim();
  return featurize(tokens, tweet_id, space, word_table, sentence_store);
}

}  // namespace ami
