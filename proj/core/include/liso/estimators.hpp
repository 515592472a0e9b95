#pragma once

#include "liso/rng.hpp"
#include "liso/types.hpp"

namespace liso {

/// L_i = -alpha * (values_i - reference) - sample_log_densities_i.
///
/// With reference = 0 this is the log of the Laplace importance weight
/// exp(-alpha f(X_i)) / q(X_i). Any other reference shifts every L_i by the
/// same constant, which the self-normalized average ignores; passing the
/// smallest observed value keeps -alpha * (f - reference) exact when the
/// values themselves carry a large offset. A +inf value maps to L_i = -inf.
/// Throws InvalidArgument for alpha <= 0, NaN inputs or mismatched lengths.
Vector laplace_log_weights(double alpha, const Eigen::Ref<const Vector>& values,
                           const Eigen::Ref<const Vector>& sample_log_densities,
                           double reference = 0.0);

/// p_i = exp(L_i - M) / sum_j exp(L_j - M) with M = max L.
/// Throws DegenerateWeights when every L_i is -inf.
Vector normalized_weights(const Eigen::Ref<const Vector>& log_weights);

/// sum_i p_i X_i over the columns of `points`; a convex combination.
Vector self_normalized_average(const Eigen::Ref<const PointSet>& points,
                               const Eigen::Ref<const Vector>& log_weights);

/// (sum p_i^2)^-1, in [1, n].
double effective_sample_size(const Eigen::Ref<const Vector>& log_weights);

/// Per-coordinate bootstrap standard error of the self-normalized average,
/// resampling (point, log-weight) pairs with replacement. Resamples whose
/// weights all vanish are redrawn.
Vector bootstrap_standard_error(const Eigen::Ref<const PointSet>& points,
                                const Eigen::Ref<const Vector>& log_weights, int resamples,
                                SeededRng& rng);

/// The evaluated sample set of one optimizer run.
///
/// Points, objective values and sampling log-densities are appended once and
/// never modified. Log-weights over any prefix can be recomputed for a new
/// temperature; they are stored relative to the prefix's smallest finite
/// value (see laplace_log_weights), recorded as reference().
class WeightedEnsemble {
 public:
  WeightedEnsemble(int dimension, Eigen::Index capacity);

  void append(const Eigen::Ref<const Vector>& point, double value, double sample_log_density);

  Eigen::Index size() const noexcept { return size_; }
  int dimension() const noexcept { return static_cast<int>(points_.rows()); }

  auto points() const { return points_.leftCols(size_); }
  auto values() const { return values_.head(size_); }
  auto sample_log_densities() const { return log_densities_.head(size_); }
  auto log_weights() const { return log_weights_.head(weighted_); }
  double alpha() const noexcept { return alpha_; }
  double reference() const noexcept { return reference_; }

  /// Recomputes the log-weights of the first `count` samples at `alpha`.
  void reweight(double alpha, Eigen::Index count);

  /// Self-normalized average of the currently weighted prefix.
  /// Throws DegenerateWeights when all of its weights vanish.
  Vector weighted_average() const;

  double effective_sample_size() const;

  /// Index of the smallest value among the first `count` samples; ties go to
  /// the lowest index.
  Eigen::Index argmin(Eigen::Index count) const;

 private:
  PointSet points_;
  Vector values_;
  Vector log_densities_;
  Vector log_weights_;
  Eigen::Index size_ = 0;
  Eigen::Index weighted_ = 0;
  double alpha_ = 0.0;
  double reference_ = 0.0;
};

}  // namespace liso
