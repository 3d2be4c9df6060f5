#include "ami/preprocess.h"

#include <algorithm>

#include "ami/errors.h"
#include "ami/porter_stemmer.h"
#include "ami/unicode.h"
#include "text_io.h"

namespace ami {
namespace {

bool is_ascii_alnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9');
}

char32_t ascii_lower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + 32 : c;
}

bool starts_with_ci(std::u32string_view text, std::size_t pos,
                    std::u32string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(text[pos + i]) != prefix[i]) return false;
  }
  return true;
}

bool in_ranges(char32_t cp, std::span<const CodepointRange> ranges) {
  auto it = std::upper_bound(
      ranges.begin(), ranges.end(), cp,
      [](char32_t c, const CodepointRange& r) { return c < r.first; });
  return it != ranges.begin() && std::prev(it)->contains(cp);
}

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) {
    line = line.substr(0, pos);
  }
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
    line.remove_suffix(1);
  }
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
    line.remove_prefix(1);
  }
  return line;
}

}  // namespace

void PreprocessConfig::validate() const {
  for (const auto& [key, value] : contractions) {
    if (key.empty() || lowercase(key) != key) {
      throw DataError("contraction key '" + key + "' is not lowercase");
    }
  }
  if (stopwords.empty()) throw DataError("stopword list is empty");
  for (std::size_t i = 0; i < emoji_ranges.size(); ++i) {
    if (emoji_ranges[i].first > emoji_ranges[i].last) {
      throw DataError("emoji range " + std::to_string(i) + " is reversed");
    }
    if (i > 0 && emoji_ranges[i].first <= emoji_ranges[i - 1].last) {
      throw DataError("emoji ranges must be sorted and non-overlapping");
    }
  }
}

std::map<std::string, std::string> load_contractions(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> table;
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty() || lines[n].front() == '#') continue;
    const auto f = io::split(lines[n], '\t');
    if (f.size() != 2 || f[0].empty()) {
      throw DataError(io::location(path, n + 1) + ": expected key<TAB>value");
    }
    table[std::string(f[0])] = std::string(f[1]);
  }
  return table;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::set<std::string> words;
  const std::string content = io::read_file(path);
  for (auto line : io::split_lines(content)) {
    line = strip_comment(line);
    if (!line.empty()) words.emplace(line);
  }
  return words;
}

std::vector<CodepointRange> load_emoji_ranges(const std::filesystem::path& path) {
  std::vector<CodepointRange> ranges;
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  auto parse_hex = [&](std::string_view s, std::size_t line) {
    char32_t v = 0;
    if (s.empty() || s.size() > 6) {
      throw DataError(io::location(path, line) + ": bad codepoint");
    }
    for (char c : s) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw DataError(io::location(path, line) + ": bad hex digit");
      v = v * 16 + static_cast<char32_t>(d);
    }
    return v;
  };
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = strip_comment(lines[n]);
    if (line.empty()) continue;
    const auto dash = line.find('-');
    CodepointRange r;
    if (dash == std::string_view::npos) {
      r.first = r.last = parse_hex(line, n + 1);
    } else {
      r.first = parse_hex(line.substr(0, dash), n + 1);
      r.last = parse_hex(line.substr(dash + 1), n + 1);
    }
    ranges.push_back(r);
  }
  return ranges;
}

PreprocessConfig PreprocessConfig::load(const std::filesystem::path& dir) {
  PreprocessConfig c;
  c.contractions = load_contractions(dir / "contractions.tsv");
  c.stopwords = load_stopwords(dir / "stopwords_en.txt");
  c.emoji_ranges = load_emoji_ranges(dir / "emoji_ranges.txt");
  c.validate();
  return c;
}

PreprocessConfig PreprocessConfig::load_default() { return load(AMI_DATA_DIR); }

ContractionTable::ContractionTable(
    const std::map<std::string, std::string>& table) {
  for (const auto& [key, value] : table) {
    entries_.push_back(
        {unicode::decode_utf8(key), unicode::decode_utf8(value)});
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.key.size() > b.key.size();
                   });
}

std::string ContractionTable::expand(std::string_view text) const {
  std::u32string in = unicode::decode_utf8(text);
  // Typographic apostrophes are matched as the ASCII one.
  for (auto& c : in) {
    if (c == U'’' || c == U'ʼ') c = U'\'';
  }
  std::u32string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const bool word_start = i == 0 || !unicode::is_word_char(in[i - 1]);
    const Entry* match = nullptr;
    if (word_start) {
      for (const auto& e : entries_) {
        const std::size_t end = i + e.key.size();
        if (end > in.size()) continue;
        if (std::u32string_view(in).substr(i, e.key.size()) != e.key) continue;
        if (end < in.size() && unicode::is_word_char(in[end])) continue;
        match = &e;
        break;
      }
    }
    if (match) {
      out += match->value;
      i += match->key.size();
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return unicode::encode_utf8(out);
}

std::string remove_urls(std::string_view text) {
  const std::u32string in = unicode::decode_utf8(text);
  std::u32string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const bool boundary = i == 0 || !is_ascii_alnum(in[i - 1]);
    if (boundary && (starts_with_ci(in, i, U"http://") ||
                     starts_with_ci(in, i, U"https://") ||
                     starts_with_ci(in, i, U"www."))) {
      while (i < in.size() && !unicode::is_whitespace(in[i])) ++i;
      out.push_back(U' ');
      continue;
    }
    out.push_back(in[i]);
    ++i;
  }
  return unicode::encode_utf8(out);
}

std::string lowercase(std::string_view text) {
  std::u32string s = unicode::decode_utf8(text);
  for (auto& c : s) c = unicode::to_lower(c);
  return unicode::encode_utf8(s);
}

std::string expand_contractions(std::string_view text,
                                const ContractionTable& table) {
  return table.expand(text);
}

std::string strip_emoji_and_punct(std::string_view text,
                                  std::span<const CodepointRange> emoji_ranges) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : unicode::decode_utf8(text)) {
    if (in_ranges(c, emoji_ranges)) continue;
    if (unicode::is_punct_or_symbol(c)) {
      out.push_back(' ');
    } else {
      unicode::append_utf8(c, out);
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : unicode::decode_utf8(text)) {
    if (unicode::is_whitespace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append_utf8(c, current);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> remove_stopwords(
    std::vector<std::string> tokens, const std::set<std::string>& stopwords) {
  std::erase_if(tokens,
                [&](const std::string& t) { return stopwords.contains(t); });
  return tokens;
}

std::vector<std::string> stem(std::vector<std::string> tokens) {
  for (auto& t : tokens) t = porter_stem(t);
  return tokens;
}

Preprocessor::Preprocessor(PreprocessConfig config)
    : config_(std::move(config)), contractions_(config_.contractions) {
  config_.validate();
}

TokenSequence Preprocessor::operator()(std::string_view text,
                                       std::string source_id) const {
  const StageToggles& on = config_.stages;
  std::string s(text);
  if (on.remove_urls) s = remove_urls(s);
  if (on.lowercase) s = lowercase(s);
  if (on.expand_contractions) s = contractions_.expand(s);
  if (on.strip_emoji_and_punct) s = strip_emoji_and_punct(s, config_.emoji_ranges);
  TokenSequence seq;
  seq.source_id = std::move(source_id);
  seq.tokens = tokenize(s);
  if (on.remove_stopwords) {
    seq.tokens = remove_stopwords(std::move(seq.tokens), config_.stopwords);
  }
  if (on.stem) seq.tokens = stem(std::move(seq.tokens));
  return seq;
}

TokenSequence preprocess(std::string_view text, const PreprocessConfig& config,
                         std::string source_id) {
  return Preprocessor(config)(text, std::move(source_id));
}

}  // namespace ami
