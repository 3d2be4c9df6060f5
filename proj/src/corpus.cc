#include "ami/corpus.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "ami/errors.h"
#include "text_io.h"

namespace ami {
namespace {

constexpr std::array<std::string_view, 6> kCategoryNames = {
    "0", "stereotype", "dominance", "derailing", "sexual_harassment",
    "discredit"};
constexpr std::array<std::string_view, 3> kTargetNames = {"0", "active",
                                                          "passive"};

constexpr std::string_view kLabeledHeader =
    "id\ttext\tmisogynous\tmisogyny_category\ttarget";
constexpr std::string_view kUnlabeledHeader = "id\ttext";

// Uniform integer in [0, bound) from raw engine output; std distributions are
// implementation-defined and would make splits platform dependent.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace

std::string_view to_string(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::string_view to_string(Target t) {
  return kTargetNames[static_cast<std::size_t>(t)];
}

std::optional<Category> parse_category(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (s == kCategoryNames[i]) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::optional<Target> parse_target(std::string_view s) {
  for (std::size_t i = 0; i < kTargetNames.size(); ++i) {
    if (s == kTargetNames[i]) return static_cast<Target>(i);
  }
  return std::nullopt;
}

bool LabeledTweet::consistent() const {
  if (misogynous == 0) {
    return category == Category::kNone && target == Target::kNone;
  }
  return category != Category::kNone && target != Target::kNone;
}

Dataset parse_dataset(std::string_view content, const LoadOptions& options,
                      std::vector<LoadIssue>* issues,
                      const std::string& source_name) {
  const auto lines = io::split_lines(content);
  const std::string_view header =
      options.labeled ? kLabeledHeader : kUnlabeledHeader;
  if (lines.empty() || lines.front() != header) {
    throw DataError(io::location(source_name, 1) + ": expected header '" +
                    std::string(header) + "'");
  }
  const std::size_t columns = options.labeled ? 5 : 2;

  Dataset d;
  d.has_labels = options.labeled;
  std::unordered_set<std::string> seen;

  auto report = [&](std::size_t line, std::string msg, bool skipped) {
    if (options.strict) {
      throw DataError(io::location(source_name, line) + ": " + msg);
    }
    if (issues) issues->push_back({line, std::move(msg), skipped});
  };

  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (lines[n].empty()) continue;
    const auto fields = io::split(lines[n], '\t');
    if (fields.size() != columns) {
      report(line_no,
             "expected " + std::to_string(columns) + " columns, found " +
                 std::to_string(fields.size()),
             true);
      continue;
    }
    LabeledTweet t;
    t.id = std::string(fields[0]);
    t.text = std::string(fields[1]);
    if (t.id.empty()) {
      report(line_no, "empty id", true);
      continue;
    }
    if (options.labeled) {
      if (fields[2] != "0" && fields[2] != "1") {
        report(line_no, "misogynous must be 0 or 1, got '" +
                            std::string(fields[2]) + "'",
               true);
        continue;
      }
      t.misogynous = fields[2] == "1" ? 1 : 0;
      const auto category = parse_category(fields[3]);
      if (!category) {
        report(line_no, "unknown category '" + std::string(fields[3]) + "'",
               true);
        continue;
      }
      const auto target = parse_target(fields[4]);
      if (!target) {
        report(line_no, "unknown target '" + std::string(fields[4]) + "'",
               true);
        continue;
      }
      t.category = *category;
      t.target = *target;
    }
    if (!seen.insert(t.id).second) {
      report(line_no, "duplicate id '" + t.id + "'", true);
      continue;
    }
    if (options.labeled && !t.consistent()) {
      report(line_no,
             "label inconsistency: misogynous=" + std::to_string(t.misogynous) +
                 " with category=" + std::string(to_string(t.category)) +
                 " target=" + std::string(to_string(t.target)),
             false);
    }
    d.tweets.push_back(std::move(t));
  }
  if (d.tweets.empty()) {
    throw DataError(source_name + ": no tweets loaded");
  }
  return d;
}

LoadResult load_dataset(const std::filesystem::path& path,
                        const LoadOptions& options) {
  LoadResult result;
  result.dataset = parse_dataset(io::read_file(path), options, &result.issues,
                                 path.string());
  return result;
}

std::string format_dataset(const Dataset& d) {
  std::string out(d.has_labels ? kLabeledHeader : kUnlabeledHeader);
  out += '\n';
  for (const auto& t : d.tweets) {
    if (t.text.find_first_of("\t\n\r") != std::string::npos ||
        t.id.find_first_of("\t\n\r") != std::string::npos) {
      throw DataError("tweet '" + t.id + "' contains a tab or newline");
    }
    out += t.id;
    out += '\t';
    out += t.text;
    if (d.has_labels) {
      out += '\t';
      out += std::to_string(t.misogynous);
      out += '\t';
      out += to_string(t.category);
      out += '\t';
      out += to_string(t.target);
    }
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& d) {
  io::write_file(path, format_dataset(d));
}

LabelCounts label_distribution(const Dataset& d) {
  if (!d.has_labels) throw DataError("label distribution needs a labelled dataset");
  LabelCounts c;
  for (const auto& t : d.tweets) {
    if (t.misogynous) {
      ++c.misogynous;
    } else {
      ++c.not_misogynous;
    }
    ++c.category[static_cast<std::size_t>(t.category)];
    ++c.target[static_cast<std::size_t>(t.target)];
  }
  c.category[0] = 0;
  c.target[0] = 0;
  return c;
}

std::string format_distribution(
    const std::vector<std::pair<std::string, LabelCounts>>& splits) {
  std::ostringstream os;
  std::vector<int> widths;
  for (const auto& [name, counts] : splits) {
    widths.push_back(std::max(10, static_cast<int>(name.size()) + 2));
  }
  auto row = [&](std::string_view type, std::string_view label, auto get) {
    os << std::left << std::setw(12) << type << std::setw(20) << label;
    for (std::size_t i = 0; i < splits.size(); ++i) {
      os << std::right << std::setw(widths[i]) << get(splits[i].second);
    }
    os << '\n';
  };
  os << std::left << std::setw(12) << "type" << std::setw(20) << "label";
  for (std::size_t i = 0; i < splits.size(); ++i) {
    os << std::right << std::setw(widths[i]) << splits[i].first;
  }
  os << '\n';
  row("misogyny", "misogynous", [](const LabelCounts& c) { return c.misogynous; });
  row("misogyny", "not_misogynous",
      [](const LabelCounts& c) { return c.not_misogynous; });
  for (Category cat : {Category::kDiscredit, Category::kDerailing,
                       Category::kDominance, Category::kSexualHarassment,
                       Category::kStereotype}) {
    row("category", to_string(cat),
        [cat](const LabelCounts& c) { return c.count(cat); });
  }
  for (Target t : kTargets) {
    row("target", to_string(t), [t](const LabelCounts& c) { return c.count(t); });
  }
  row("total", "", [](const LabelCounts& c) { return c.total(); });
  return os.str();
}

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed) {
  if (!d.has_labels) throw DataError("stratified split needs labels");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  std::array<std::vector<std::size_t>, 2> strata;
  for (std::size_t i = 0; i < d.tweets.size(); ++i) {
    strata[d.tweets[i].misogynous ? 1 : 0].push_back(i);
  }

  const auto n = static_cast<double>(d.tweets.size());
  const auto total_train =
      static_cast<std::size_t>(std::llround(train_fraction * n));
  std::array<std::size_t, 2> take{};
  std::array<double, 2> remainder{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    const double exact = train_fraction * static_cast<double>(strata[s].size());
    take[s] = static_cast<std::size_t>(std::floor(exact));
    remainder[s] = exact - static_cast<double>(take[s]);
    assigned += take[s];
  }
  while (assigned < total_train) {
    const std::size_t s = remainder[1] > remainder[0] ? 1 : 0;
    ++take[s];
    remainder[s] = -1.0;
    ++assigned;
  }
  if (assigned == 0 || assigned == d.tweets.size()) {
    throw DataError("train fraction " + io::format_double(train_fraction) +
                    " leaves one side of the split empty");
  }

  std::mt19937_64 rng(seed);
  std::vector<char> in_train(d.tweets.size(), 0);
  for (std::size_t s = 0; s < 2; ++s) {
    auto idx = strata[s];
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[bounded(rng, i)]);
    }
    for (std::size_t k = 0; k < take[s]; ++k) in_train[idx[k]] = 1;
  }

  std::pair<Dataset, Dataset> out;
  out.first.has_labels = out.second.has_labels = true;
  for (std::size_t i = 0; i < d.tweets.size(); ++i) {
    (in_train[i] ? out.first : out.second).tweets.push_back(d.tweets[i]);
  }
  return out;
}

std::string format_run_file(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.id;
    out += '\t';
    out += std::to_string(r.misogynous);
    out += '\t';
    out += to_string(r.category);
    out += '\t';
    out += to_string(r.target);
    out += '\n';
  }
  return out;
}

void write_run_file(const std::filesystem::path& path,
                    const std::vector<RunRecord>& records) {
  io::write_file(path, format_run_file(records));
}

std::vector<RunRecord> parse_predictions(std::string_view content,
                                         const std::string& source_name) {
  std::vector<RunRecord> records;
  const auto lines = io::split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto where = io::location(source_name, n + 1);
    const auto f = io::split(lines[n], '\t');
    if (f.size() != 4) throw DataError(where + ": expected 4 columns");
    RunRecord r;
    r.id = std::string(f[0]);
    if (f[1] != "0" && f[1] != "1") {
      throw DataError(where + ": misogynous must be 0 or 1");
    }
    r.misogynous = f[1] == "1";
    const auto c = parse_category(f[2]);
    const auto t = parse_target(f[3]);
    if (!c) throw DataError(where + ": unknown category '" + std::string(f[2]) + "'");
    if (!t) throw DataError(where + ": unknown target '" + std::string(f[3]) + "'");
    r.category = *c;
    r.target = *t;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> load_predictions(const std::filesystem::path& path) {
  return parse_predictions(io::read_file(path), path.string());
}

}  // namespace ami
