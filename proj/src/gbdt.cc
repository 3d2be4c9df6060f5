#include "ami/gbdt.h"

#include <algorithm>
#include <cmath>

#include "ami/errors.h"
#include "ami/logreg.h"

namespace ami {
namespace {

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

// Non-zero entries of every feature, sorted by (value, row). Zeros, including
// absent sparse entries, are handled as one group per node.
std::vector<std::vector<ColumnEntry>> build_columns(
    std::span<const FeatureVector> x, std::size_t n_features,
    const Parallelism& par) {
  std::vector<std::vector<ColumnEntry>> columns(n_features);
  for (std::size_t r = 0; r < x.size(); ++r) {
    const auto row = static_cast<std::uint32_t>(r);
    for (const auto& e : x[r].sparse()) {
      if (e.value != 0.0) columns[e.index].push_back({row, e.value});
    }
    const std::size_t off = x[r].dense_offset();
    const auto& dense = x[r].dense();
    for (std::size_t j = 0; j < dense.size(); ++j) {
      if (dense[j] != 0.0) columns[off + j].push_back({row, dense[j]});
    }
  }
  parallel_for(n_features, par, [&](std::size_t f) {
    std::sort(columns[f].begin(), columns[f].end(),
              [](const ColumnEntry& a, const ColumnEntry& b) {
                return a.value < b.value || (a.value == b.value && a.row < b.row);
              });
  });
  return columns;
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;

  // Larger gain wins; equal gain goes to the lower feature index.
  bool better_than(const SplitCandidate& o) const {
    if (feature < 0) return false;
    if (o.feature < 0) return true;
    return gain > o.gain || (gain == o.gain && feature < o.feature);
  }
};

double midpoint(double a, double b) {
  const double t = 0.5 * (a + b);
  return t > a ? t : b;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<ColumnEntry>>& columns,
              const GbdtConfig& config, const Parallelism& par)
      : columns_(columns), config_(config), par_(par) {}

  RegressionTree build(std::span<const double> grad, std::span<const double> hess,
                       std::vector<int>& position,
                       std::vector<NodeStats>& stats) {
    const std::size_t n_rows = grad.size();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::fill(position.begin(), position.end(), 0);
    stats.assign(1, NodeStats{});
    accumulate_stats(grad, hess, position, stats);

    std::vector<int> frontier = {0};
    for (int depth = 0; depth < config_.max_depth && !frontier.empty(); ++depth) {
      std::vector<int> slot_of(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        slot_of[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
      }
      const auto best = find_splits(grad, hess, position, slot_of, frontier, stats);

      std::vector<int> next;
      const std::vector<int> old_position = position;
      std::vector<char> split_here(tree.nodes.size(), 0);
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        const SplitCandidate& c = best[s];
        if (c.feature < 0 || !(c.gain > 0.0)) continue;
        const int id = frontier[s];
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = c.feature;
        node.threshold = c.threshold;
        node.left = left;
        node.right = left + 1;
        split_here[static_cast<std::size_t>(id)] = 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      split_here.resize(tree.nodes.size(), 0);

      // Zero-valued samples take the default side, then listed entries are
      // routed by comparison.
      for (std::size_t r = 0; r < n_rows; ++r) {
        const int id = old_position[r];
        if (!split_here[static_cast<std::size_t>(id)]) continue;
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        position[r] = node.default_left() ? node.left : node.right;
      }
      for (int id : frontier) {
        if (!split_here[static_cast<std::size_t>(id)]) continue;
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        for (const auto& e : columns_[static_cast<std::size_t>(node.feature)]) {
          if (old_position[e.row] != id) continue;
          position[e.row] = e.value < node.threshold ? node.left : node.right;
        }
      }
      stats.resize(tree.nodes.size());
      for (int id : next) stats[static_cast<std::size_t>(id)] = NodeStats{};
      accumulate_stats(grad, hess, position, stats, &next);
      frontier = std::move(next);
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      TreeNode& node = tree.nodes[id];
      if (node.is_leaf()) {
        node.leaf = -stats[id].grad / (stats[id].hess + config_.reg_lambda);
      }
    }
    return tree;
  }

 private:
  // Sums in row order for the given nodes (all nodes when only is null).
  static void accumulate_stats(std::span<const double> grad,
                               std::span<const double> hess,
                               const std::vector<int>& position,
                               std::vector<NodeStats>& stats,
                               const std::vector<int>* only = nullptr) {
    std::vector<char> wanted(stats.size(), only ? 0 : 1);
    if (only) {
      for (int id : *only) wanted[static_cast<std::size_t>(id)] = 1;
    }
    for (std::size_t r = 0; r < grad.size(); ++r) {
      const auto id = static_cast<std::size_t>(position[r]);
      if (!wanted[id]) continue;
      stats[id].grad += grad[r];
      stats[id].hess += hess[r];
      ++stats[id].count;
    }
  }

  std::vector<SplitCandidate> find_splits(
      std::span<const double> grad, std::span<const double> hess,
      const std::vector<int>& position, const std::vector<int>& slot_of,
      const std::vector<int>& frontier, const std::vector<NodeStats>& stats) {
    const std::size_t slots = frontier.size();
    const std::size_t n_features = columns_.size();
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(
                                     static_cast<std::size_t>(par_.resolved()),
                                     n_features));
    const std::size_t chunk = (n_features + workers - 1) / workers;
    std::vector<std::vector<SplitCandidate>> per_worker(
        workers, std::vector<SplitCandidate>(slots));

    parallel_for(workers, Parallelism{static_cast<int>(workers)},
                 [&](std::size_t w) {
      Scratch scratch(slots);
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n_features, begin + chunk);
      for (std::size_t f = begin; f < end; ++f) {
        scan_feature(static_cast<int>(f), grad, hess, position, slot_of,
                     frontier, stats, scratch, per_worker[w]);
      }
    });

    std::vector<SplitCandidate> best(slots);
    for (const auto& local : per_worker) {
      for (std::size_t s = 0; s < slots; ++s) {
        if (local[s].better_than(best[s])) best[s] = local[s];
      }
    }
    return best;
  }

  struct Scratch {
    explicit Scratch(std::size_t slots)
        : nz_grad(slots), nz_hess(slots), nz_count(slots), left_grad(slots),
          left_hess(slots), last(slots), has_last(slots), zero_done(slots) {}
    std::vector<double> nz_grad, nz_hess;
    std::vector<std::size_t> nz_count;
    std::vector<double> left_grad, left_hess, last;
    std::vector<char> has_last, zero_done;
  };

  void scan_feature(int feature, std::span<const double> grad,
                    std::span<const double> hess, const std::vector<int>& position,
                    const std::vector<int>& slot_of,
                    const std::vector<int>& frontier,
                    const std::vector<NodeStats>& stats, Scratch& sc,
                    std::vector<SplitCandidate>& best) const {
    const auto& column = columns_[static_cast<std::size_t>(feature)];
    const std::size_t slots = frontier.size();
    std::fill(sc.nz_grad.begin(), sc.nz_grad.end(), 0.0);
    std::fill(sc.nz_hess.begin(), sc.nz_hess.end(), 0.0);
    std::fill(sc.nz_count.begin(), sc.nz_count.end(), 0);
    for (const auto& e : column) {
      const int s = slot_of[static_cast<std::size_t>(position[e.row])];
      if (s < 0) continue;
      sc.nz_grad[s] += grad[e.row];
      sc.nz_hess[s] += hess[e.row];
      ++sc.nz_count[s];
    }
    std::fill(sc.left_grad.begin(), sc.left_grad.end(), 0.0);
    std::fill(sc.left_hess.begin(), sc.left_hess.end(), 0.0);
    std::fill(sc.has_last.begin(), sc.has_last.end(), 0);
    std::fill(sc.zero_done.begin(), sc.zero_done.end(), 0);

    const double lambda = config_.reg_lambda;
    const double min_h = config_.min_child_hessian;
    auto evaluate = [&](std::size_t s, double threshold) {
      const NodeStats& node = stats[static_cast<std::size_t>(frontier[s])];
      const double gl = sc.left_grad[s];
      const double hl = sc.left_hess[s];
      const double gr = node.grad - gl;
      const double hr = node.hess - hl;
      if (hl < min_h || hr < min_h) return;
      const double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                                 node.grad * node.grad / (node.hess + lambda));
      SplitCandidate c{gain, feature, threshold};
      if (c.better_than(best[s])) best[s] = c;
    };
    auto flush_zero = [&](std::size_t s) {
      sc.zero_done[s] = 1;
      const NodeStats& node = stats[static_cast<std::size_t>(frontier[s])];
      if (node.count == sc.nz_count[s]) return;
      if (sc.has_last[s]) evaluate(s, midpoint(sc.last[s], 0.0));
      sc.left_grad[s] += node.grad - sc.nz_grad[s];
      sc.left_hess[s] += node.hess - sc.nz_hess[s];
      sc.last[s] = 0.0;
      sc.has_last[s] = 1;
    };

    for (const auto& e : column) {
      const int si = slot_of[static_cast<std::size_t>(position[e.row])];
      if (si < 0) continue;
      const auto s = static_cast<std::size_t>(si);
      if (!sc.zero_done[s] && e.value > 0.0) flush_zero(s);
      if (sc.has_last[s] && e.value != sc.last[s]) {
        evaluate(s, midpoint(sc.last[s], e.value));
      }
      sc.left_grad[s] += grad[e.row];
      sc.left_hess[s] += hess[e.row];
      sc.last[s] = e.value;
      sc.has_last[s] = 1;
    }
    for (std::size_t s = 0; s < slots; ++s) {
      if (!sc.zero_done[s]) flush_zero(s);
    }
  }

  const std::vector<std::vector<ColumnEntry>>& columns_;
  const GbdtConfig& config_;
  Parallelism par_;
};

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

GbdtConfig GbdtConfig::from_preset(std::string_view name) {
  if (name != "xgb-like" && name != "cb-like") {
    throw UsageError("unknown gbdt preset '" + std::string(name) +
                     "' (expected xgb-like or cb-like)");
  }
  GbdtConfig c;
  c.preset = std::string(name);
  return c;
}

void GbdtConfig::validate() const {
  if (!(scale_pos_weight > 0.0)) throw DataError("scale_pos_weight must be positive");
  if (!(reg_lambda > 0.0)) throw DataError("reg_lambda must be positive");
  if (!(eta > 0.0)) throw DataError("eta must be positive");
  if (max_depth < 1) throw DataError("max_depth must be at least 1");
  if (n_trees < 0) throw DataError("n_trees must be non-negative");
  if (!(min_child_hessian >= 0.0)) throw DataError("min_child_hessian must be >= 0");
  if (!(base_score > 0.0 && base_score < 1.0)) {
    throw DataError("base_score must lie in (0, 1)");
  }
}

int RegressionTree::leaf_index(const FeatureVector& x) const {
  int id = 0;
  while (!nodes[static_cast<std::size_t>(id)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<std::size_t>(id)];
    id = x.value_at(static_cast<std::size_t>(n.feature)) < n.threshold ? n.left
                                                                         : n.right;
  }
  return id;
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    for (int c : {nodes[i].left, nodes[i].right}) {
      d[static_cast<std::size_t>(c)] = d[i] + 1;
      deepest = std::max(deepest, d[i] + 1);
    }
  }
  return deepest;
}

double GbdtModel::margin(const FeatureVector& x, int limit) const {
  if (x.fingerprint() != fingerprint || x.size() != n_features) {
    throw LayoutMismatchError("feature vector layout " +
                              fingerprint_hex(x.fingerprint()) +
                              " does not match model layout " +
                              fingerprint_hex(fingerprint));
  }
  double m = logit(config.base_score);
  const std::size_t n =
      limit < 0 ? trees.size()
                : std::min(trees.size(), static_cast<std::size_t>(limit));
  for (std::size_t t = 0; t < n; ++t) m += config.eta * trees[t].leaf_value(x);
  return m;
}

double GbdtModel::predict_proba(const FeatureVector& x) const {
  if (trees.empty()) {
    // Exact even where sigma(logit(p)) would round.
    margin(x);
    return config.base_score;
  }
  return sigmoid(margin(x));
}

GradientPair logistic_gradient(double margin, int y, double scale_pos_weight) {
  const double p = sigmoid(margin);
  const double w = y == 1 ? scale_pos_weight : 1.0;
  return {(p - static_cast<double>(y)) * w, p * (1.0 - p) * w};
}

double weighted_log_loss(std::span<const double> margins, std::span<const int> y,
                         double scale_pos_weight) {
  double loss = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    loss += y[i] == 1 ? scale_pos_weight * softplus(-margins[i])
                      : softplus(margins[i]);
  }
  return loss;
}

GbdtModel train_gbdt(std::span<const FeatureVector> x, std::span<const int> y,
                     const GbdtConfig& config, const Parallelism& par,
                     GbdtTrace* trace) {
  config.validate();
  check_binary_training_set(x, y);

  GbdtModel model;
  model.config = config;
  model.fingerprint = x.front().fingerprint();
  model.n_features = x.front().size();

  const std::size_t n = x.size();
  const auto columns = build_columns(x, model.n_features, par);
  std::vector<double> margins(n, logit(config.base_score));
  std::vector<double> grad(n), hess(n);
  std::vector<int> position(n, 0);
  std::vector<NodeStats> stats;
  if (trace) {
    *trace = {};
    trace->loss.push_back(weighted_log_loss(margins, y, config.scale_pos_weight));
  }

  TreeBuilder builder(columns, config, par);
  for (int round = 0; round < config.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto gp = logistic_gradient(margins[i], y[i], config.scale_pos_weight);
      grad[i] = gp.grad;
      hess[i] = gp.hess;
    }
    RegressionTree tree = builder.build(grad, hess, position, stats);
    for (std::size_t i = 0; i < n; ++i) {
      margins[i] += config.eta *
                    tree.nodes[static_cast<std::size_t>(position[i])].leaf;
    }
    model.trees.push_back(std::move(tree));
    if (trace) {
      trace->loss.push_back(weighted_log_loss(margins, y, config.scale_pos_weight));
      trace->node_stats.push_back(stats);
    }
  }
  return model;
}

}  // namespace ami
