#ifndef AMI_MULTICLASS_H_
#define AMI_MULTICLASS_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ami/gbdt.h"
#include "ami/logreg.h"

namespace ami {

enum class Engine { kLogReg, kGbdt };

std::string_view to_string(Engine e);
// Accepts "lr" / "logreg" and "gbdt" / "xgb" / "cb".
Engine parse_engine(std::string_view s);

struct EngineConfig {
  Engine engine = Engine::kLogReg;
  LogRegConfig logreg;
  GbdtConfig gbdt;

  bool operator==(const EngineConfig&) const = default;
};

using BinaryModel = std::variant<LinearModel, GbdtModel>;

double predict_proba(const BinaryModel& m, const FeatureVector& x);
Engine engine_of(const BinaryModel& m);

BinaryModel train_binary(std::span<const FeatureVector> x, std::span<const int> y,
                         const EngineConfig& config, const Parallelism& par = {});

// Index of the largest value; ties go to the lowest index.
std::size_t argmax_first(std::span<const double> values);

// One-vs-rest. With two classes a single submodel scores class 1 and class 0
// gets 1 - p.
struct MulticlassModel {
  std::vector<std::string> labels;
  std::vector<BinaryModel> submodels;

  std::vector<double> predict_proba(const FeatureVector& x) const;
  std::size_t predict(const FeatureVector& x) const;
};

// y holds class indices into labels. Every class must occur, and no class may
// cover the whole training set. Submodels train in parallel; the result does
// not depend on the thread count.
MulticlassModel train_multiclass(std::span<const FeatureVector> x,
                                 std::span<const int> y,
                                 std::vector<std::string> labels,
                                 const EngineConfig& config,
                                 const Parallelism& par = {});

}  // namespace ami

#endif  // AMI_MULTICLASS_H_
