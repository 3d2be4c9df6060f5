#include "ami/multiclass.h"

#include <optional>

#include "ami/errors.h"

namespace ami {

std::string_view to_string(Engine e) {
  return e == Engine::kLogReg ? "lr" : "gbdt";
}

Engine parse_engine(std::string_view s) {
  if (s == "lr" || s == "logreg") return Engine::kLogReg;
  if (s == "gbdt" || s == "xgb" || s == "cb") return Engine::kGbdt;
  throw UsageError("unknown engine '" + std::string(s) + "' (expected lr or gbdt)");
}

double predict_proba(const BinaryModel& m, const FeatureVector& x) {
  return std::visit([&](const auto& model) { return model.predict_proba(x); }, m);
}

Engine engine_of(const BinaryModel& m) {
  return std::holds_alternative<LinearModel>(m) ? Engine::kLogReg : Engine::kGbdt;
}

BinaryModel train_binary(std::span<const FeatureVector> x, std::span<const int> y,
                         const EngineConfig& config, const Parallelism& par) {
  if (config.engine == Engine::kLogReg) return train_logreg(x, y, config.logreg);
  return train_gbdt(x, y, config.gbdt, par);
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> MulticlassModel::predict_proba(const FeatureVector& x) const {
  if (labels.size() == 2) {
    const double p = ami::predict_proba(submodels.at(0), x);
    return {1.0 - p, p};
  }
  std::vector<double> probs;
  probs.reserve(submodels.size());
  for (const auto& m : submodels) probs.push_back(ami::predict_proba(m, x));
  return probs;
}

std::size_t MulticlassModel::predict(const FeatureVector& x) const {
  return argmax_first(predict_proba(x));
}

MulticlassModel train_multiclass(std::span<const FeatureVector> x,
                                 std::span<const int> y,
                                 std::vector<std::string> labels,
                                 const EngineConfig& config,
                                 const Parallelism& par) {
  const std::size_t k = labels.size();
  if (k < 2) throw DataError("multiclass training needs at least two classes");
  if (x.size() != y.size()) throw DataError("feature and label counts differ");
  std::vector<std::size_t> support(k, 0);
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= k) {
      throw DataError("class index " + std::to_string(label) + " out of range");
    }
    ++support[static_cast<std::size_t>(label)];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (support[c] == 0) {
      throw DataError("class '" + labels[c] + "' has no training examples");
    }
  }

  MulticlassModel model;
  model.labels = std::move(labels);
  const std::size_t n_models = k == 2 ? 1 : k;
  std::vector<std::vector<int>> targets(n_models, std::vector<int>(y.size()));
  for (std::size_t m = 0; m < n_models; ++m) {
    const int cls = k == 2 ? 1 : static_cast<int>(m);
    for (std::size_t i = 0; i < y.size(); ++i) targets[m][i] = y[i] == cls;
  }

  std::vector<std::optional<BinaryModel>> trained(n_models);
  // Outer parallelism over classes; each submodel trains single-threaded when
  // there are enough classes to fill the workers.
  const int outer = std::min<int>(par.resolved(), static_cast<int>(n_models));
  const Parallelism inner{std::max(1, par.resolved() / std::max(1, outer))};
  parallel_for(n_models, Parallelism{outer}, [&](std::size_t m) {
    trained[m] = train_binary(x, targets[m], config, inner);
  });
  for (auto& t : trained) model.submodels.push_back(std::move(*t));
  return model;
}

}  // namespace ami
