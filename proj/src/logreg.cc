#include "ami/logreg.h"

#include <cmath>
#include <numeric>
#include <string>

#include "ami/errors.h"

namespace ami {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void LogRegConfig::validate() const {
  if (!(C > 0.0)) throw DataError("logistic regression C must be positive");
  if (!(tolerance > 0.0)) throw DataError("tolerance must be positive");
  if (max_iterations < 1) throw DataError("max_iterations must be at least 1");
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double LinearModel::margin(const FeatureVector& x) const {
  if (x.fingerprint() != fingerprint || x.size() != weights.size()) {
    throw LayoutMismatchError("feature vector layout " +
                              fingerprint_hex(x.fingerprint()) +
                              " does not match model layout " +
                              fingerprint_hex(fingerprint));
  }
  return x.dot(weights) + bias;
}

double LinearModel::predict_proba(const FeatureVector& x) const {
  return sigmoid(margin(x));
}

void check_binary_training_set(std::span<const FeatureVector> x,
                               std::span<const int> y) {
  if (x.size() != y.size()) throw DataError("feature and label counts differ");
  if (x.size() < 2) throw DataError("need at least two training samples");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label != 0 && label != 1) throw DataError("binary labels must be 0 or 1");
    (label ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw DataError("training labels contain a single class");
  }
  const std::size_t n = x.front().size();
  const auto fp = x.front().fingerprint();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != n || x[i].fingerprint() != fp) {
      throw LayoutMismatchError("training vectors have different layouts");
    }
    for (const auto& e : x[i].sparse()) {
      if (!std::isfinite(e.value)) {
        throw DataError("non-finite feature value in sample " + std::to_string(i));
      }
    }
    for (double v : x[i].dense()) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite feature value in sample " + std::to_string(i));
      }
    }
  }
}

LogisticObjective::LogisticObjective(std::span<const FeatureVector> x,
                                     std::span<const int> y, double C,
                                     bool fit_intercept)
    : x_(x), C_(C), fit_intercept_(fit_intercept) {
  dim_ = x.empty() ? 0 : x.front().size();
  sign_.reserve(y.size());
  for (int label : y) sign_.push_back(label ? 1.0 : -1.0);
}

double LogisticObjective::value(std::span<const double> params) const {
  const auto w = params.first(dim_);
  const double b = fit_intercept_ ? params[dim_] : 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    loss += softplus(-sign_[i] * (x_[i].dot(w) + b));
  }
  return 0.5 * dot(w, w) + C_ * loss;
}

double LogisticObjective::value_and_gradient(std::span<const double> params,
                                             std::span<double> grad) const {
  const auto w = params.first(dim_);
  const double b = fit_intercept_ ? params[dim_] : 0.0;
  std::copy(w.begin(), w.end(), grad.begin());
  grad[dim_] = 0.0;
  double loss = 0.0;
  double grad_b = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double m = sign_[i] * (x_[i].dot(w) + b);
    loss += softplus(-m);
    // d/dz log(1 + exp(-s z)) = -s sigma(-s z)
    const double coeff = -C_ * sign_[i] * sigmoid(-m);
    x_[i].add_scaled_to(coeff, grad.first(dim_));
    grad_b += coeff;
  }
  if (fit_intercept_) grad[dim_] = grad_b;
  return 0.5 * dot(w, w) + C_ * loss;
}

void LogisticObjective::set_point(std::span<const double> params) {
  const auto w = params.first(dim_);
  const double b = fit_intercept_ ? params[dim_] : 0.0;
  curvature_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double p = sigmoid(x_[i].dot(w) + b);
    curvature_[i] = p * (1.0 - p);
  }
}

void LogisticObjective::hessian_vector(std::span<const double> v,
                                       std::span<double> out) const {
  const auto vw = v.first(dim_);
  const double vb = fit_intercept_ ? v[dim_] : 0.0;
  std::copy(vw.begin(), vw.end(), out.begin());
  double out_b = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double u = C_ * curvature_[i] * (x_[i].dot(vw) + vb);
    x_[i].add_scaled_to(u, out.first(dim_));
    out_b += u;
  }
  out[dim_] = fit_intercept_ ? out_b : 0.0;
}

LinearModel train_logreg(std::span<const FeatureVector> x, std::span<const int> y,
                         const LogRegConfig& config, LogRegTrace* trace) {
  config.validate();
  check_binary_training_set(x, y);
  LogisticObjective objective(x, y, config.C, config.fit_intercept);
  const std::size_t n = objective.dimension();

  std::vector<double> params(n, 0.0), grad(n), step(n), residual(n), dir(n),
      hdir(n), trial(n);
  LogRegTrace local;
  LogRegTrace& t = trace ? *trace : local;
  t = {};

  double f = objective.value_and_gradient(params, grad);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const double gnorm = std::sqrt(dot(grad, grad));
    t.objective.push_back(f);
    t.gradient_norm.push_back(gnorm);
    if (gnorm < config.tolerance) {
      t.converged = true;
      break;
    }

    // Conjugate gradient on H step = -grad.
    objective.set_point(params);
    std::fill(step.begin(), step.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) residual[i] = dir[i] = -grad[i];
    double rs = dot(residual, residual);
    const double cg_tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
    const int max_cg = static_cast<int>(std::min<std::size_t>(n, 250));
    for (int k = 0; k < max_cg && std::sqrt(rs) > cg_tol; ++k) {
      objective.hessian_vector(dir, hdir);
      const double curv = dot(dir, hdir);
      if (!(curv > 0.0)) break;
      const double alpha = rs / curv;
      for (std::size_t i = 0; i < n; ++i) {
        step[i] += alpha * dir[i];
        residual[i] -= alpha * hdir[i];
      }
      const double rs_next = dot(residual, residual);
      const double beta = rs_next / rs;
      rs = rs_next;
      for (std::size_t i = 0; i < n; ++i) dir[i] = residual[i] + beta * dir[i];
    }
    double slope = dot(grad, step);
    if (!(slope < 0.0)) {
      // Fall back to steepest descent.
      for (std::size_t i = 0; i < n; ++i) step[i] = -grad[i];
      slope = -gnorm * gnorm;
    }

    double eta = 1.0;
    double f_trial = 0.0;
    bool accepted = false;
    while (eta > 1e-12) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = params[i] + eta * step[i];
      f_trial = objective.value(trial);
      if (f_trial <= f + 1e-4 * eta * slope) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable
    params.swap(trial);
    f = objective.value_and_gradient(params, grad);
  }
  if (f < t.objective.back()) {
    t.objective.push_back(f);
    t.gradient_norm.push_back(std::sqrt(dot(grad, grad)));
  }

  LinearModel model;
  model.weights.assign(params.begin(), params.begin() + static_cast<long>(n - 1));
  model.bias = config.fit_intercept ? params[n - 1] : 0.0;
  model.fingerprint = x.front().fingerprint();
  model.config = config;
  return model;
}

}  // namespace ami
