#ifndef AMI_CORPUS_H_
#define AMI_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ami {

// Declared order is the label order used by the category classifier.
enum class Category : std::uint8_t {
  kNone = 0,
  kStereotype,
  kDominance,
  kDerailing,
  kSexualHarassment,
  kDiscredit,
};
inline constexpr std::array<Category, 5> kCategories = {
    Category::kStereotype, Category::kDominance, Category::kDerailing,
    Category::kSexualHarassment, Category::kDiscredit};

enum class Target : std::uint8_t { kNone = 0, kActive, kPassive };
inline constexpr std::array<Target, 2> kTargets = {Target::kActive,
                                                   Target::kPassive};

// Lowercase file spelling; kNone renders as "0".
std::string_view to_string(Category c);
std::string_view to_string(Target t);
std::optional<Category> parse_category(std::string_view s);
std::optional<Target> parse_target(std::string_view s);

struct LabeledTweet {
  std::string id;
  std::string text;
  int misogynous = 0;
  Category category = Category::kNone;
  Target target = Target::kNone;

  bool consistent() const;
  bool operator==(const LabeledTweet&) const = default;
};

struct Dataset {
  std::vector<LabeledTweet> tweets;
  bool has_labels = false;

  std::size_t size() const { return tweets.size(); }
};

struct LoadOptions {
  bool labeled = true;
  // Strict aborts on the first problem; lenient skips malformed rows and keeps
  // label-inconsistent rows, recording an issue for each.
  bool strict = true;
};

struct LoadIssue {
  std::size_t line = 0;
  std::string message;
  bool row_skipped = false;
};

struct LoadResult {
  Dataset dataset;
  std::vector<LoadIssue> issues;

  std::size_t warning_count() const { return issues.size(); }
};

// TSV with header `id text misogynous misogyny_category target` (unlabelled:
// `id text`). Throws DataError naming the line in strict mode, when the file is
// missing, or when no row survives.
LoadResult load_dataset(const std::filesystem::path& path,
                        const LoadOptions& options = {});
Dataset parse_dataset(std::string_view content, const LoadOptions& options,
                      std::vector<LoadIssue>* issues = nullptr,
                      const std::string& source_name = "<memory>");

// Inverse of load_dataset. Text containing tabs or newlines is rejected.
std::string format_dataset(const Dataset& d);
void write_dataset(const std::filesystem::path& path, const Dataset& d);

struct LabelCounts {
  std::size_t misogynous = 0;
  std::size_t not_misogynous = 0;
  // Indexed by Category / Target enum value; slot 0 (kNone) unused.
  std::array<std::size_t, 6> category{};
  std::array<std::size_t, 3> target{};

  std::size_t total() const { return misogynous + not_misogynous; }
  std::size_t count(Category c) const {
    return category[static_cast<std::size_t>(c)];
  }
  std::size_t count(Target t) const {
    return target[static_cast<std::size_t>(t)];
  }
};

// Throws DataError for an unlabelled dataset.
LabelCounts label_distribution(const Dataset& d);

// Table-1 style text table, one column per named split.
std::string format_distribution(
    const std::vector<std::pair<std::string, LabelCounts>>& splits);

// Stratified on the misogyny label. Per-stratum train sizes use largest
// remainder so the total is round(fraction * n); order within each side
// follows the input.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed);

struct RunRecord {
  std::string id;
  int misogynous = 0;
  Category category = Category::kNone;
  Target target = Target::kNone;

  bool operator==(const RunRecord&) const = default;
};

std::string format_run_file(const std::vector<RunRecord>& records);
void write_run_file(const std::filesystem::path& path,
                    const std::vector<RunRecord>& records);
std::vector<RunRecord> load_predictions(const std::filesystem::path& path);
std::vector<RunRecord> parse_predictions(std::string_view content,
                                         const std::string& source_name);

}  // namespace ami

#endif  // AMI_CORPUS_H_
