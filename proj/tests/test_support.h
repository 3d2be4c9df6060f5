#ifndef AMI_TESTS_TEST_SUPPORT_H_
#define AMI_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "ami/features.h"

namespace ami::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(AMI_TEST_DATA_DIR) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ami_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline FeatureVector dense_vector(std::vector<double> v,
                                  std::uint64_t fingerprint = 0x5eed) {
  const std::size_t n = v.size();
  return FeatureVector({{"dense", 0, n}}, {}, std::move(v), fingerprint);
}

inline FeatureVector sparse_vector(SparseBlock s, std::size_t n,
                                   std::uint64_t fingerprint = 0x5eed) {
  return FeatureVector({{"tfidf", 0, n}}, std::move(s), {}, fingerprint);
}

inline std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n,
                                    double sd = 1.0) {
  std::normal_distribution<double> dist(0.0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace ami::testing

#endif  // AMI_TESTS_TEST_SUPPORT_H_
