#include "liso/estimators.hpp"

#include "liso/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace liso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Vector laplace_log_weights(double alpha, const Eigen::Ref<const Vector>& values,
                           const Eigen::Ref<const Vector>& sample_log_densities,
                           double reference) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("laplace_log_weights: alpha must be positive and finite");
  if (values.size() != sample_log_densities.size())
    throw InvalidArgument("laplace_log_weights: length mismatch");
  if (!std::isfinite(reference))
    throw InvalidArgument("laplace_log_weights: reference must be finite");
  Vector out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double lq = sample_log_densities[i];
    if (std::isnan(v) || v == -kInf || !std::isfinite(lq))
      throw InvalidArgument("laplace_log_weights: non-finite input at index " + std::to_string(i));
    out[i] = (v == kInf) ? -kInf : -alpha * (v - reference) - lq;
  }
  return out;
}

Vector normalized_weights(const Eigen::Ref<const Vector>& log_weights) {
  if (log_weights.size() == 0) throw InvalidArgument("normalized_weights: empty input");
  double max_log = -kInf;
  for (double l : log_weights) {
    if (std::isnan(l) || l == kInf)
      throw InvalidArgument("normalized_weights: log-weights must be < +inf and not NaN");
    max_log = std::max(max_log, l);
  }
  if (max_log == -kInf) throw DegenerateWeights("all importance weights vanish");
  Vector p(log_weights.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - max_log);
    total += p[i];
  }
  p /= total;
  return p;
}

Vector self_normalized_average(const Eigen::Ref<const PointSet>& points,
                               const Eigen::Ref<const Vector>& log_weights) {
  if (points.cols() != log_weights.size())
    throw InvalidArgument("self_normalized_average: point/weight count mismatch");
  return points * normalized_weights(log_weights);
}

double effective_sample_size(const Eigen::Ref<const Vector>& log_weights) {
  return 1.0 / normalized_weights(log_weights).squaredNorm();
}

Vector bootstrap_standard_error(const Eigen::Ref<const PointSet>& points,
                                const Eigen::Ref<const Vector>& log_weights, int resamples,
                                SeededRng& rng) {
  if (resamples < 2) throw InvalidArgument("bootstrap: need at least 2 resamples");
  const Eigen::Index n = log_weights.size();
  if (points.cols() != n || n < 1) throw InvalidArgument("bootstrap: bad ensemble");
  normalized_weights(log_weights);  // rejects an all-degenerate ensemble up front

  const auto d = points.rows();
  Vector sum = Vector::Zero(d);
  Vector sum_sq = Vector::Zero(d);
  Vector weighted(d);
  std::vector<Eigen::Index> picks(static_cast<std::size_t>(n));
  for (int r = 0; r < resamples; ++r) {
    double max_log;
    do {
      max_log = -kInf;
      for (auto& k : picks) {
        k = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
        max_log = std::max(max_log, log_weights[k]);
      }
    } while (max_log == -kInf);
    weighted.setZero();
    double total = 0.0;
    for (auto k : picks) {
      const double w = std::exp(log_weights[k] - max_log);
      weighted += w * points.col(k);
      total += w;
    }
    const Vector estimate = weighted / total;
    sum += estimate;
    sum_sq += estimate.cwiseProduct(estimate);
  }
  const double m = resamples;
  const Vector mean = sum / m;
  return ((sum_sq - m * mean.cwiseProduct(mean)) / (m - 1.0)).cwiseMax(0.0).cwiseSqrt();
}

WeightedEnsemble::WeightedEnsemble(int dimension, Eigen::Index capacity)
    : points_(dimension, capacity),
      values_(capacity),
      log_densities_(capacity),
      log_weights_(capacity) {
  if (dimension < 1 || capacity < 1)
    throw InvalidArgument("ensemble: dimension and capacity must be >= 1");
}

void WeightedEnsemble::append(const Eigen::Ref<const Vector>& point, double value,
                              double sample_log_density) {
  if (size_ == points_.cols()) throw InvalidArgument("ensemble: capacity exceeded");
  if (point.size() != points_.rows()) throw InvalidArgument("ensemble: point dimension mismatch");
  points_.col(size_) = point;
  values_[size_] = value;
  log_densities_[size_] = sample_log_density;
  ++size_;
}

void WeightedEnsemble::reweight(double alpha, Eigen::Index count) {
  if (count < 1 || count > size_) throw InvalidArgument("ensemble: reweight count out of range");
  double reference = kInf;
  for (Eigen::Index i = 0; i < count; ++i) reference = std::min(reference, values_[i]);
  if (reference == kInf) reference = 0.0;  // every weight is zero; keep the formula finite
  log_weights_.head(count) =
      laplace_log_weights(alpha, values_.head(count), log_densities_.head(count), reference);
  weighted_ = count;
  alpha_ = alpha;
  reference_ = reference;
}

Vector WeightedEnsemble::weighted_average() const {
  if (weighted_ == 0) throw InvalidArgument("ensemble: not weighted yet");
  return self_normalized_average(points_.leftCols(weighted_), log_weights_.head(weighted_));
}

double WeightedEnsemble::effective_sample_size() const {
  if (weighted_ == 0) throw InvalidArgument("ensemble: not weighted yet");
  return liso::effective_sample_size(log_weights_.head(weighted_));
}

Eigen::Index WeightedEnsemble::argmin(Eigen::Index count) const {
  if (count < 1 || count > size_) throw InvalidArgument("ensemble: argmin count out of range");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < count; ++i)
    if (values_[i] < values_[best]) best = i;
  return best;
}

}  // namespace liso
