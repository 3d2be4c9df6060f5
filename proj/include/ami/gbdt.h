#ifndef AMI_GBDT_H_
#define AMI_GBDT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ami/features.h"
#include "ami/parallel.h"

namespace ami {

// Binary logistic boosting. The two named presets share every value and only
// differ in name; they stand in for the XGBoost and CatBoost runs.
struct GbdtConfig {
  std::string preset = "xgb-like";
  double scale_pos_weight = 0.8;
  double reg_lambda = 3.0;
  double eta = 0.3;
  int max_depth = 6;
  int n_trees = 100;
  double min_child_hessian = 1.0;
  double base_score = 0.5;

  static GbdtConfig from_preset(std::string_view name);
  void validate() const;
  bool operator==(const GbdtConfig&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf = 0.0;  // -G / (H + lambda), before shrinkage

  bool is_leaf() const { return feature < 0; }
  // Absent sparse entries have value 0 and follow the same comparison.
  bool default_left() const { return 0.0 < threshold; }
  bool operator==(const TreeNode&) const = default;
};

// Samples go left when value < threshold.
struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_index(const FeatureVector& x) const;
  double leaf_value(const FeatureVector& x) const {
    return nodes[static_cast<std::size_t>(leaf_index(x))].leaf;
  }
  int depth() const;
};

struct GbdtModel {
  GbdtConfig config;
  std::vector<RegressionTree> trees;
  std::uint64_t fingerprint = 0;
  std::size_t n_features = 0;

  // logit(base_score) + sum over trees of eta * leaf, accumulated in tree order.
  // Only the first `limit` trees are used when limit >= 0.
  double margin(const FeatureVector& x, int limit = -1) const;
  double predict_proba(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const {
    return predict_proba(x) >= 0.5 ? 1 : 0;
  }
};

struct NodeStats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;
};

struct GbdtTrace {
  // Weighted training log-loss before any tree, then after each round.
  std::vector<double> loss;
  // Per tree, parallel to RegressionTree::nodes; sums taken in row order.
  std::vector<std::vector<NodeStats>> node_stats;
};

// Gradient and hessian of the log-loss at margin m; both scaled by
// scale_pos_weight when y == 1.
struct GradientPair {
  double grad;
  double hess;
};
GradientPair logistic_gradient(double margin, int y, double scale_pos_weight);

double weighted_log_loss(std::span<const double> margins, std::span<const int> y,
                         double scale_pos_weight);

// Exact greedy split search over all features. Results are identical for any
// thread count.
GbdtModel train_gbdt(std::span<const FeatureVector> x, std::span<const int> y,
                     const GbdtConfig& config, const Parallelism& par = {},
                     GbdtTrace* trace = nullptr);

}  // namespace ami

#endif  // AMI_GBDT_H_
