#include "liso/errors.hpp"
#include "liso/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace liso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

PointSet random_points(SeededRng& rng, int d, int n, double scale = 1.0) {
  PointSet p(d, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < d; ++i) p(i, j) = scale * rng.normal();
  return p;
}

TEST(LaplaceLogWeights, Examples) {
  EXPECT_EQ(laplace_log_weights(1.0, vec({0, 0}), vec({0, 0})), vec({0, 0}));
  EXPECT_EQ(laplace_log_weights(2.0, vec({1, 3}), vec({0, 0})), vec({-2, -6}));
  EXPECT_EQ(laplace_log_weights(1.0, vec({0, kInf}), vec({0, 0})), vec({0, -kInf}));
  EXPECT_EQ(laplace_log_weights(2.0, vec({1, 3}), vec({0.5, -1}), 1.0), vec({-0.5, -3}));
}

TEST(LaplaceLogWeights, RejectsBadInput) {
  EXPECT_THROW(laplace_log_weights(0.0, vec({1}), vec({0})), InvalidArgument);
  EXPECT_THROW(laplace_log_weights(-1.0, vec({1}), vec({0})), InvalidArgument);
  EXPECT_THROW(laplace_log_weights(1.0, vec({std::nan("")}), vec({0})), InvalidArgument);
  EXPECT_THROW(laplace_log_weights(1.0, vec({1, 2}), vec({0})), InvalidArgument);
}

TEST(SelfNormalizedAverage, Examples) {
  const PointSet pts = vec({0, 2}).transpose();
  EXPECT_NEAR(self_normalized_average(pts, vec({0, 0}))[0], 1.0, 1e-15);
  EXPECT_NEAR(self_normalized_average(pts, vec({0, std::log(3.0)}))[0], 1.5, 1e-15);
  const PointSet one = vec({4.25, -1.0});
  EXPECT_EQ(self_normalized_average(one, vec({-12345.0})), vec({4.25, -1.0}));
}

TEST(SelfNormalizedAverage, AllWeightsZeroIsDegenerate) {
  const PointSet pts = vec({0, 2}).transpose();
  EXPECT_THROW(self_normalized_average(pts, vec({-kInf, -kInf})), DegenerateWeights);
  EXPECT_EQ(self_normalized_average(pts, vec({-kInf, 0.0}))[0], 2.0);
}

TEST(EffectiveSampleSize, Examples) {
  EXPECT_NEAR(effective_sample_size(Vector::Constant(8, -3.0)), 8.0, 1e-12);
  EXPECT_NEAR(effective_sample_size(vec({-kInf, 2.0, -kInf})), 1.0, 1e-15);
  EXPECT_NEAR(effective_sample_size(vec({0.0, std::log(3.0)})), 1.6, 1e-12);
  EXPECT_THROW(effective_sample_size(vec({-kInf})), DegenerateWeights);
}

// Shifting every objective value by a constant must not move the estimate.
TEST(Properties, ObjectiveShiftInvariance) {
  SeededRng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 200, d = 5;
    const PointSet pts = random_points(rng, d, n);
    Vector values(n), logq(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      values[i] = pts.col(i).squaredNorm();
      logq[i] = -0.5 * pts.col(i).squaredNorm();
    }
    const double alpha = 0.5 + 4.0 * rng.uniform();
    WeightedEnsemble base(d, n);
    for (Eigen::Index i = 0; i < n; ++i) base.append(pts.col(i), values[i], logq[i]);
    base.reweight(alpha, n);
    const Vector reference = base.weighted_average();
    for (double c : {1.0, -1.0, 1e6, -1e6}) {
      WeightedEnsemble shifted(d, n);
      for (Eigen::Index i = 0; i < n; ++i) shifted.append(pts.col(i), values[i] + c, logq[i]);
      shifted.reweight(alpha, n);
      EXPECT_LT((shifted.weighted_average() - reference).norm(), 1e-10) << "c = " << c;
    }
  }
}

TEST(Properties, WeightsFormAProbabilityVectorAndEstimateStaysInHull) {
  SeededRng rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 300);
    const int d = 1 + static_cast<int>(rng.next_u64() % 6);
    const bool extreme = trial % 3 == 0;
    const PointSet pts = random_points(rng, d, n, 3.0);
    Vector values(n), logq(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      values[i] = (extreme ? 1e4 : 1.0) * rng.uniform();
      logq[i] = -5.0 * rng.uniform();
    }
    const double alpha = extreme ? 1e3 : 0.1 + 10 * rng.uniform();
    const Vector L = laplace_log_weights(alpha, values, logq);
    const Vector p = normalized_weights(L);
    EXPECT_TRUE(p.allFinite());
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    const Vector est = self_normalized_average(pts, L);
    ASSERT_TRUE(est.allFinite());
    for (Eigen::Index k = 0; k < d; ++k) {
      EXPECT_GE(est[k], pts.row(k).minCoeff() - 1e-12);
      EXPECT_LE(est[k], pts.row(k).maxCoeff() + 1e-12);
    }
  }
}

TEST(WeightedEnsemble, AppendReweightAndArgmin) {
  WeightedEnsemble e(1, 4);
  e.append(vec({0.0}), 3.0, 0.0);
  e.append(vec({1.0}), 1.0, 0.0);
  e.append(vec({2.0}), 1.0, 0.0);
  EXPECT_EQ(e.size(), 3);
  EXPECT_EQ(e.argmin(3), 1);
  EXPECT_EQ(e.argmin(1), 0);
  e.reweight(2.0, 3);
  EXPECT_EQ(e.alpha(), 2.0);
  EXPECT_EQ(e.reference(), 1.0);
  // Stored weights differ from the literal formula by the constant -alpha * reference.
  const Vector literal = laplace_log_weights(2.0, e.values(), e.sample_log_densities());
  EXPECT_TRUE((e.log_weights() - literal).isApproxToConstant(2.0, 1e-15));
  e.reweight(1.0, 2);
  EXPECT_EQ(e.log_weights().size(), 2);
  e.append(vec({3.0}), 0.0, 0.0);
  EXPECT_THROW(e.append(vec({4.0}), 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(e.reweight(1.0, 5), InvalidArgument);
}

TEST(WeightedEnsemble, AllInfiniteValuesAreDegenerate) {
  WeightedEnsemble e(2, 2);
  e.append(vec({0.0, 0.0}), kInf, -1.0);
  e.append(vec({1.0, 1.0}), kInf, -1.0);
  e.reweight(1.0, 2);
  EXPECT_THROW(e.weighted_average(), DegenerateWeights);
  EXPECT_EQ(e.argmin(2), 0);
}

TEST(Bootstrap, EqualWeightsGiveClassicalStandardError) {
  SeededRng rng(303);
  const int n = 400;
  const PointSet pts = random_points(rng, 1, n);
  SeededRng boot(5);
  const Vector se = bootstrap_standard_error(pts, Vector::Zero(n), 400, boot);
  const double mean = pts.row(0).mean();
  const double sd = std::sqrt((pts.row(0).array() - mean).square().sum() / (n - 1));
  EXPECT_NEAR(se[0] / (sd / std::sqrt(n)), 1.0, 0.15);
}

}  // namespace
}  // namespace liso
