#ifndef AMI_LOGREG_H_
#define AMI_LOGREG_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ami/features.h"

namespace ami {

struct LogRegConfig {
  double C = 1.0;  // inverse regularization strength
  int max_iterations = 100;
  double tolerance = 1e-6;  // on the gradient norm
  bool fit_intercept = true;

  void validate() const;
  bool operator==(const LogRegConfig&) const = default;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::uint64_t fingerprint = 0;
  LogRegConfig config;

  double margin(const FeatureVector& x) const;
  // sigma(w.x + b). Throws LayoutMismatchError on a foreign feature vector.
  double predict_proba(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const {
    return predict_proba(x) >= 0.5 ? 1 : 0;
  }
};

double sigmoid(double z);
// log(1 + exp(z)) without overflow.
double softplus(double z);

// f(w, b) = 0.5 |w|^2 + C sum_i log(1 + exp(-s_i (w.x_i + b))), s_i in {-1, +1}.
// Parameters are laid out as [w_0 .. w_{d-1}, b]; without an intercept b is
// held at zero and its gradient reported as zero.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const FeatureVector> x, std::span<const int> y,
                    double C, bool fit_intercept);

  std::size_t dimension() const { return dim_ + 1; }
  double value(std::span<const double> params) const;
  // Returns the value; gradient written to grad.
  double value_and_gradient(std::span<const double> params,
                            std::span<double> grad) const;
  // H v at the point whose margins were last passed to set_point().
  void set_point(std::span<const double> params);
  void hessian_vector(std::span<const double> v, std::span<double> out) const;

 private:
  std::span<const FeatureVector> x_;
  std::vector<double> sign_;
  double C_;
  bool fit_intercept_;
  std::size_t dim_;
  std::vector<double> curvature_;  // sigma(z)(1 - sigma(z)) per sample
};

struct LogRegTrace {
  std::vector<double> objective;      // per outer iteration, before the step
  std::vector<double> gradient_norm;
  bool converged = false;
};

// Truncated Newton (conjugate gradient inner solve, Armijo backtracking)
// from w = 0, b = 0. Throws DataError on single-class labels, mismatched sizes
// or non-finite features.
LinearModel train_logreg(std::span<const FeatureVector> x, std::span<const int> y,
                         const LogRegConfig& config,
                         LogRegTrace* trace = nullptr);

// Shared precondition checks for the binary trainers.
void check_binary_training_set(std::span<const FeatureVector> x,
                               std::span<const int> y);

}  // namespace ami

#endif  // AMI_LOGREG_H_
