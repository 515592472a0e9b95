#pragma once

#include "liso/distributions.hpp"
#include "liso/objectives.hpp"
#include "liso/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace liso {

/// alpha0 * n^(2 / (d + 2)): the temperature that balances the Laplace bias
/// against the importance-sampling variance.
double alpha_schedule(double alpha0, std::uint64_t n, int d);

enum class AlphaMode {
  kScheduled,  ///< alpha = alpha_schedule(alpha0, evaluations, d)
  kFixed,      ///< alpha = alpha0 throughout
};

struct StaticConfig {
  std::uint64_t budget = 0;
  double alpha0 = 1.0;
  SamplingPolicy q0 = IsotropicGaussian(Vector::Zero(1), 1.0);
  std::uint64_t seed = 0;
  AlphaMode alpha_mode = AlphaMode::kScheduled;
  /// Evaluation counts at which the trace records the anytime estimate.
  /// Empty selects default_checkpoints(budget). The budget itself is always
  /// recorded last.
  std::vector<std::uint64_t> checkpoints;
};

/// Axis-aligned box; project() is the Euclidean projection (componentwise clamp).
struct Box {
  Vector lower;
  Vector upper;

  Vector project(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

struct AdaptiveConfig {
  std::uint64_t budget = 0;
  double alpha0 = 1.0;
  IsotropicGaussian q0 = IsotropicGaussian(Vector::Zero(1), 1.0);
  /// Weight of q0 in the sampling mixture (1 - w) N(mu, sigma2 I) + w q0.
  double mixture_weight = 0.0;
  double sigma2 = 1.0;
  /// Points drawn per adaptation step; 1 gives the fully sequential scheme.
  std::uint64_t batch_size = 300;
  /// Adaptive LISO only: clamp every new mean into this box.
  std::optional<Box> projection_box;
  std::uint64_t seed = 0;
  AlphaMode alpha_mode = AlphaMode::kScheduled;
  std::vector<std::uint64_t> checkpoints;
  /// Isotropic ES only: scale recombination weights to sum to one.
  bool normalize_es_weights = true;
};

struct RunTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<Vector> estimates;
  /// ||estimate - x*||^2 per checkpoint; empty when x* is unknown.
  std::vector<double> squared_errors;
  /// Effective sample size per checkpoint for the weighted methods (NaN where
  /// the argmin fallback was used); empty for the others.
  std::vector<double> ess;
  /// Every weight vanished at the final checkpoint; the estimate is the argmin sample.
  bool final_degenerate = false;
};

struct RunResult {
  Vector estimate;
  RunTrace trace;
};

/// Geometric grid of `count` integers from `first` to `last`, deduplicated.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t last,
                                                 std::size_t count);

/// 30 geometric points from min(100, budget) to budget.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t budget);

// Every driver evaluates the objective exactly `budget` times and is
// bit-deterministic in its seed. The trace estimate at checkpoint c equals the
// final estimate of the same driver run with budget c.

/// Static LISO: n i.i.d. draws from q0, softmin-weighted average.
RunResult run_liso(Objective& objective, const StaticConfig& config);

/// Best of n i.i.d. draws from q0 (same stream as run_liso for equal seeds).
RunResult run_random_search(Objective& objective, const StaticConfig& config);

/// Adaptive LISO in mini-batches. Batch k is drawn from
/// (1 - w) N(mu_{k-1}, sigma2 I) + w q0 (q0 itself for k = 1); after it, every
/// point seen so far is reweighted at the temperature for the total number of
/// evaluations, using the cached value and sampling log-density of each point.
RunResult run_adaptive_liso(Objective& objective, const AdaptiveConfig& config);

/// Like run_adaptive_liso, but each new center is the best point so far.
RunResult run_adaptive_random_search(Objective& objective, const AdaptiveConfig& config);

struct RecombinationWeights {
  std::size_t parents = 0;
  Vector weights;  // log((B+1)/2) - log(i), i = 1..parents
};

RecombinationWeights isotropic_es_recombination_weights(std::uint64_t batch_size);

/// Rank-weighted mean of the best half of a batch (columns of `batch`).
/// Ties in `values` keep column order. A batch of one returns that point.
Vector es_recombine(const Eigen::Ref<const PointSet>& batch,
                    const Eigen::Ref<const Vector>& values, bool normalize);

/// Mean-only isotropic evolution strategy: batch k is drawn from
/// N(mu_{k-1}, sigma2 I) (q0 for k = 1) and mu_k is the recombination of batch
/// k alone. The mixture weight and projection box are not used.
RunResult run_isotropic_es(Objective& objective, const AdaptiveConfig& config);

}  // namespace liso
