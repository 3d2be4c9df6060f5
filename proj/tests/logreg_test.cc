#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ami/errors.h"
#include "ami/logreg.h"
#include "test_support.h"

namespace ami {
namespace {

using testing::dense_vector;

struct Problem {
  std::vector<FeatureVector> x;
  std::vector<int> y;
};

// Mixed sparse/dense rows with noisy linear labels.
Problem random_problem(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 rng(seed);
  const auto w = testing::gaussian(rng, d);
  std::bernoulli_distribution keep(0.4);
  std::normal_distribution<double> noise(0.0, 0.5);
  Problem p;
  const std::size_t n_sparse = d / 2;
  for (std::size_t i = 0; i < n; ++i) {
    SparseBlock s;
    for (std::size_t j = 0; j < n_sparse; ++j) {
      if (keep(rng)) s.push_back({static_cast<std::uint32_t>(j), noise(rng) * 2.0});
    }
    auto dense = testing::gaussian(rng, d - n_sparse);
    FeatureVector x({{"tfidf", 0, n_sparse}, {"bowv", n_sparse, d - n_sparse}},
                    std::move(s), std::move(dense), 77);
    double z = noise(rng);
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x.value_at(j);
    p.x.push_back(std::move(x));
    p.y.push_back(z > 0.0 ? 1 : 0);
  }
  return p;
}

TEST(LogReg, SymmetricPairGivesHalfAtOrigin) {
  const std::vector<FeatureVector> x = {dense_vector({-1.0}), dense_vector({1.0})};
  const std::vector<int> y = {0, 1};
  const LinearModel m = train_logreg(x, y, {});
  EXPECT_EQ(m.bias, 0.0);
  EXPECT_GT(m.weights[0], 0.0);
  EXPECT_EQ(m.predict_proba(dense_vector({0.0})), 0.5);
}

TEST(LogReg, ZeroModelPredictsHalf) {
  LinearModel m;
  m.weights.assign(3, 0.0);
  m.fingerprint = 0x5eed;
  EXPECT_EQ(m.predict_proba(dense_vector({5.0, -2.0, 1e6})), 0.5);
  EXPECT_EQ(m.predict(dense_vector({1.0, 1.0, 1.0})), 1);
}

TEST(LogReg, SeparableTwoDimensionalSetIsFit) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<FeatureVector> x;
  std::vector<int> y;
  while (x.size() < 60) {
    const double a = u(rng), b = u(rng);
    const double s = a + 2.0 * b - 0.5;
    if (std::abs(s) < 0.5) continue;  // margin
    x.push_back(dense_vector({a, b}));
    y.push_back(s > 0 ? 1 : 0);
  }
  LogRegTrace trace;
  const LinearModel m = train_logreg(x, y, {}, &trace);
  EXPECT_TRUE(trace.converged);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(m.predict(x[i]), y[i]) << i;
}

TEST(LogReg, GradientMatchesCentralDifferences) {
  const Problem p = random_problem(13, 60, 20);
  for (bool intercept : {true, false}) {
    const LogisticObjective f(p.x, p.y, 0.7, intercept);
    ASSERT_EQ(f.dimension(), 21u);
    std::mt19937_64 rng(17);
    for (int point = 0; point < 10; ++point) {
      auto params = testing::gaussian(rng, f.dimension(), 0.8);
      if (!intercept) params.back() = 0.0;
      std::vector<double> grad(f.dimension());
      f.value_and_gradient(params, grad);
      const std::size_t last = intercept ? f.dimension() : f.dimension() - 1;
      for (std::size_t k = 0; k < last; ++k) {
        const double h = 1e-5 * std::max(1.0, std::abs(params[k]));
        auto plus = params, minus = params;
        plus[k] += h;
        minus[k] -= h;
        const double fd = (f.value(plus) - f.value(minus)) / (2.0 * h);
        const double rel = std::abs(fd - grad[k]) / std::max({std::abs(fd), std::abs(grad[k]), 1e-3});
        EXPECT_LT(rel, 1e-5) << "point " << point << " coordinate " << k;
      }
      if (!intercept) EXPECT_EQ(grad.back(), 0.0);
    }
  }
}

TEST(LogReg, HessianVectorMatchesGradientDifferences) {
  const Problem p = random_problem(21, 40, 10);
  LogisticObjective f(p.x, p.y, 1.0, true);
  std::mt19937_64 rng(2);
  const auto params = testing::gaussian(rng, f.dimension(), 0.5);
  const auto v = testing::gaussian(rng, f.dimension());
  f.set_point(params);
  std::vector<double> hv(f.dimension());
  f.hessian_vector(v, hv);
  const double h = 1e-6;
  std::vector<double> gp(f.dimension()), gm(f.dimension());
  auto plus = params, minus = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    plus[k] += h * v[k];
    minus[k] -= h * v[k];
  }
  f.value_and_gradient(plus, gp);
  f.value_and_gradient(minus, gm);
  for (std::size_t k = 0; k < params.size(); ++k) {
    EXPECT_NEAR(hv[k], (gp[k] - gm[k]) / (2.0 * h), 1e-5 * std::max(1.0, std::abs(hv[k])));
  }
}

TEST(LogReg, ObjectiveMonotoneAndConverges) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Problem p = random_problem(seed, 200, 20);
    LogRegTrace trace;
    const LinearModel m = train_logreg(p.x, p.y, {.C = 1.0}, &trace);
    ASSERT_GE(trace.objective.size(), 2u);
    for (std::size_t i = 1; i < trace.objective.size(); ++i) {
      EXPECT_LE(trace.objective[i], trace.objective[i - 1]) << "iteration " << i;
    }
    EXPECT_TRUE(trace.converged);
    EXPECT_LT(trace.gradient_norm.back(), 1e-6);
    EXPECT_EQ(m.weights.size(), 20u);
  }
}

TEST(LogReg, DeterministicBits) {
  const Problem p = random_problem(4, 100, 12);
  const LinearModel a = train_logreg(p.x, p.y, {});
  const LinearModel b = train_logreg(p.x, p.y, {});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(LogReg, ProbabilityMonotoneInMargin) {
  const Problem p = random_problem(9, 80, 6);
  const LinearModel m = train_logreg(p.x, p.y, {});
  std::vector<std::pair<double, double>> mp;
  for (const auto& x : p.x) mp.emplace_back(m.margin(x), m.predict_proba(x));
  std::sort(mp.begin(), mp.end());
  for (std::size_t i = 1; i < mp.size(); ++i) EXPECT_LE(mp[i - 1].second, mp[i].second);
}

TEST(LogReg, RejectsBadInput) {
  const std::vector<FeatureVector> x = {dense_vector({1.0}), dense_vector({2.0})};
  EXPECT_THROW(train_logreg(x, std::vector<int>{1, 1}, {}), DataError);
  EXPECT_THROW(train_logreg(x, std::vector<int>{1}, {}), DataError);
  const std::vector<FeatureVector> bad = {dense_vector({1.0}), dense_vector({NAN})};
  EXPECT_THROW(train_logreg(bad, std::vector<int>{0, 1}, {}), DataError);
  EXPECT_THROW(train_logreg(x, std::vector<int>{0, 1}, {.C = 0.0}), Error);
}

TEST(LogReg, FingerprintMismatchFailsFast) {
  const std::vector<FeatureVector> x = {dense_vector({-1.0}, 1), dense_vector({1.0}, 1)};
  const LinearModel m = train_logreg(x, std::vector<int>{0, 1}, {});
  EXPECT_THROW(m.predict_proba(dense_vector({0.5}, 2)), LayoutMismatchError);
  EXPECT_THROW(m.predict_proba(dense_vector({0.5, 1.0}, 1)), LayoutMismatchError);
}

TEST(LogReg, StableSigmoidAndSoftplus) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_GT(sigmoid(-800.0), -1e-300);
  EXPECT_EQ(sigmoid(800.0), 1.0);
  EXPECT_NEAR(softplus(1000.0), 1000.0, 1e-9);
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(softplus(-50.0), std::exp(-50.0), 1e-30);
}

}  // namespace
}  // namespace ami
