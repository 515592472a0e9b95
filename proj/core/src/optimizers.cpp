#include "liso/optimizers.hpp"

#include "liso/errors.hpp"
#include "liso/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace liso {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

std::vector<std::uint64_t> resolve_checkpoints(const std::vector<std::uint64_t>& requested,
                                               std::uint64_t budget) {
  std::vector<std::uint64_t> grid = requested.empty() ? default_checkpoints(budget) : requested;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 1 && grid[i] <= budget, "checkpoints must lie in [1, budget]");
    require(i == 0 || grid[i] > grid[i - 1], "checkpoints must be strictly increasing");
  }
  if (grid.empty() || grid.back() != budget) grid.push_back(budget);
  return grid;
}

double temperature(AlphaMode mode, double alpha0, std::uint64_t evaluations, int d) {
  return mode == AlphaMode::kFixed ? alpha0 : alpha_schedule(alpha0, evaluations, d);
}

/// Accumulates checkpoint records and the squared error against x*.
class TraceRecorder {
 public:
  TraceRecorder(const Objective& objective, std::vector<std::uint64_t> checkpoints,
                bool with_ess)
      : minimizer_(objective.known_minimizer()), with_ess_(with_ess) {
    trace_.checkpoints = std::move(checkpoints);
    trace_.estimates.reserve(trace_.checkpoints.size());
  }

  const std::vector<std::uint64_t>& checkpoints() const { return trace_.checkpoints; }
  std::size_t recorded() const { return trace_.estimates.size(); }
  /// Next checkpoint still to be recorded, or 0 when all are done.
  std::uint64_t pending() const {
    return recorded() < trace_.checkpoints.size() ? trace_.checkpoints[recorded()] : 0;
  }

  void record(const Vector& estimate, double ess = kNaN) {
    trace_.estimates.push_back(estimate);
    if (minimizer_) trace_.squared_errors.push_back((estimate - *minimizer_).squaredNorm());
    if (with_ess_) trace_.ess.push_back(ess);
  }

  RunResult finish(bool final_degenerate) && {
    trace_.final_degenerate = final_degenerate;
    RunResult result;
    result.estimate = trace_.estimates.back();
    result.trace = std::move(trace_);
    return result;
  }

 private:
  const std::optional<Vector>& minimizer_;
  bool with_ess_;
  RunTrace trace_;
};

struct WeightedEstimate {
  Vector point;
  double ess = kNaN;
  bool degenerate = false;
};

/// Softmin average of the first `count` ensemble points, or the argmin point
/// when every weight vanishes.
WeightedEstimate weighted_estimate(WeightedEnsemble& ensemble, Eigen::Index count,
                                   double alpha) {
  ensemble.reweight(alpha, count);
  try {
    WeightedEstimate out;
    out.point = ensemble.weighted_average();
    out.ess = ensemble.effective_sample_size();
    return out;
  } catch (const DegenerateWeights&) {
    return {ensemble.points().col(ensemble.argmin(count)), kNaN, true};
  }
}

void validate(const Objective& objective, const StaticConfig& config) {
  require(config.budget >= 1, "budget must be >= 1");
  require(config.alpha0 > 0.0 && std::isfinite(config.alpha0), "alpha0 must be positive");
  require(dimension(config.q0) == objective.dimension(),
          "q0 dimension does not match the objective");
}

void validate(const Objective& objective, const AdaptiveConfig& config) {
  require(config.budget >= 1, "budget must be >= 1");
  require(config.alpha0 > 0.0 && std::isfinite(config.alpha0), "alpha0 must be positive");
  require(config.q0.dimension() == objective.dimension(),
          "q0 dimension does not match the objective");
  require(config.mixture_weight >= 0.0 && config.mixture_weight <= 1.0,
          "mixture weight must lie in [0, 1]");
  require(config.sigma2 > 0.0 && std::isfinite(config.sigma2), "sigma2 must be positive");
  require(config.batch_size >= 1, "batch size must be >= 1");
  if (config.projection_box) {
    const Box& box = *config.projection_box;
    require(box.lower.size() == objective.dimension() && box.upper.size() == objective.dimension(),
            "projection box dimension does not match the objective");
    require((box.lower.array() <= box.upper.array()).all(), "projection box is empty");
  }
}

/// Draws `count` points from `policy` and appends them with their values and
/// sampling log-densities.
void sample_into(WeightedEnsemble& ensemble, Objective& objective, const SamplingPolicy& policy,
                 SeededRng& rng, Eigen::Index count) {
  const PointSet batch = sample(policy, rng, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Vector x = batch.col(j);
    ensemble.append(x, objective(x), log_density(policy, x));
  }
}

SamplingPolicy next_policy(const AdaptiveConfig& config, const Vector& center) {
  return MixturePolicy(config.mixture_weight, IsotropicGaussian(center, config.sigma2), config.q0);
}

enum class AdaptiveRule { kSoftmin, kArgmin };

RunResult run_adaptive(Objective& objective, const AdaptiveConfig& config, AdaptiveRule rule) {
  validate(objective, config);
  const int d = objective.dimension();
  const auto n = static_cast<Eigen::Index>(config.budget);
  const auto batch = static_cast<Eigen::Index>(config.batch_size);
  const bool softmin = rule == AdaptiveRule::kSoftmin;

  SeededRng rng(config.seed);
  WeightedEnsemble ensemble(d, n);
  TraceRecorder recorder(objective, resolve_checkpoints(config.checkpoints, config.budget),
                         softmin);

  SamplingPolicy policy = config.q0;
  Eigen::Index best = 0;
  bool degenerate = false;
  while (ensemble.size() < n) {
    const Eigen::Index start = ensemble.size();
    sample_into(ensemble, objective, policy, rng, std::min(batch, n - start));
    const Eigen::Index end = ensemble.size();

    // Estimate "as if the budget were c" for every checkpoint c in (start, end].
    // The last one is c = end, which is the next center.
    Vector center;
    Eigen::Index scanned = start;
    for (std::uint64_t c = recorder.pending(); ; c = recorder.pending()) {
      const bool at_checkpoint = c != 0 && static_cast<Eigen::Index>(c) <= end;
      const Eigen::Index count = at_checkpoint ? static_cast<Eigen::Index>(c) : end;
      for (; scanned < count; ++scanned)
        if (ensemble.values()[scanned] < ensemble.values()[best]) best = scanned;

      if (softmin) {
        WeightedEstimate est = weighted_estimate(
            ensemble, count, temperature(config.alpha_mode, config.alpha0, count, d));
        if (config.projection_box) est.point = config.projection_box->project(est.point);
        degenerate = est.degenerate;
        center = std::move(est.point);
        if (at_checkpoint) recorder.record(center, est.ess);
      } else {
        center = ensemble.points().col(best);
        if (at_checkpoint) recorder.record(center);
      }
      if (count == end) break;
    }
    policy = next_policy(config, center);
  }
  return std::move(recorder).finish(softmin && degenerate);
}

}  // namespace

double alpha_schedule(double alpha0, std::uint64_t n, int d) {
  require(alpha0 > 0.0, "alpha0 must be positive");
  require(n >= 1, "evaluation count must be >= 1");
  require(d >= 1, "dimension must be >= 1");
  return alpha0 * std::pow(static_cast<double>(n), 2.0 / (d + 2.0));
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t last,
                                                 std::size_t count) {
  require(first >= 1 && first <= last, "geometric grid needs 1 <= first <= last");
  require(count >= 1, "geometric grid needs at least one point");
  std::vector<std::uint64_t> grid;
  if (count == 1 || first == last) return {last};
  const double ratio = std::log(static_cast<double>(last) / static_cast<double>(first));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto value = static_cast<std::uint64_t>(std::llround(first * std::exp(ratio * t)));
    value = std::clamp(value, first, last);
    if (grid.empty() || value > grid.back()) grid.push_back(value);
  }
  if (grid.back() != last) grid.push_back(last);
  return grid;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t budget) {
  require(budget >= 1, "budget must be >= 1");
  return geometric_checkpoints(std::min<std::uint64_t>(100, budget), budget, 30);
}

RunResult run_liso(Objective& objective, const StaticConfig& config) {
  validate(objective, config);
  const int d = objective.dimension();
  const auto n = static_cast<Eigen::Index>(config.budget);

  SeededRng rng(config.seed);
  WeightedEnsemble ensemble(d, n);
  sample_into(ensemble, objective, config.q0, rng, n);

  TraceRecorder recorder(objective, resolve_checkpoints(config.checkpoints, config.budget), true);
  bool degenerate = false;
  for (std::uint64_t c : recorder.checkpoints()) {
    const WeightedEstimate est = weighted_estimate(
        ensemble, static_cast<Eigen::Index>(c), temperature(config.alpha_mode, config.alpha0, c, d));
    degenerate = est.degenerate;
    recorder.record(est.point, est.ess);
  }
  return std::move(recorder).finish(degenerate);
}

RunResult run_random_search(Objective& objective, const StaticConfig& config) {
  validate(objective, config);
  const auto n = static_cast<Eigen::Index>(config.budget);

  SeededRng rng(config.seed);
  WeightedEnsemble ensemble(objective.dimension(), n);
  sample_into(ensemble, objective, config.q0, rng, n);

  TraceRecorder recorder(objective, resolve_checkpoints(config.checkpoints, config.budget),
                         false);
  Eigen::Index best = 0;
  Eigen::Index scanned = 0;
  for (std::uint64_t c : recorder.checkpoints()) {
    for (; scanned < static_cast<Eigen::Index>(c); ++scanned)
      if (ensemble.values()[scanned] < ensemble.values()[best]) best = scanned;
    recorder.record(ensemble.points().col(best));
  }
  return std::move(recorder).finish(false);
}

RunResult run_adaptive_liso(Objective& objective, const AdaptiveConfig& config) {
  return run_adaptive(objective, config, AdaptiveRule::kSoftmin);
}

RunResult run_adaptive_random_search(Objective& objective, const AdaptiveConfig& config) {
  return run_adaptive(objective, config, AdaptiveRule::kArgmin);
}

RecombinationWeights isotropic_es_recombination_weights(std::uint64_t batch_size) {
  if (batch_size < 2) throw InvalidArgument("recombination weights need a batch of at least 2");
  RecombinationWeights out;
  out.parents = batch_size / 2;
  out.weights.resize(static_cast<Eigen::Index>(out.parents));
  const double top = std::log((static_cast<double>(batch_size) + 1.0) / 2.0);
  for (std::size_t i = 0; i < out.parents; ++i)
    out.weights[static_cast<Eigen::Index>(i)] = top - std::log(static_cast<double>(i + 1));
  return out;
}

Vector es_recombine(const Eigen::Ref<const PointSet>& batch, const Eigen::Ref<const Vector>& values,
                    bool normalize) {
  const Eigen::Index b = batch.cols();
  require(b >= 1 && values.size() == b, "es_recombine: batch/value size mismatch");
  if (b == 1) return batch.col(0);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(b));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return values[i] < values[j]; });

  const RecombinationWeights rw = isotropic_es_recombination_weights(static_cast<std::uint64_t>(b));
  const double scale = normalize ? 1.0 / rw.weights.sum() : 1.0;
  Vector mean = Vector::Zero(batch.rows());
  for (std::size_t i = 0; i < rw.parents; ++i)
    mean += (rw.weights[static_cast<Eigen::Index>(i)] * scale) * batch.col(order[i]);
  return mean;
}

RunResult run_isotropic_es(Objective& objective, const AdaptiveConfig& config) {
  validate(objective, config);
  require(config.batch_size >= 2, "isotropic ES needs a batch size of at least 2");
  const auto n = static_cast<Eigen::Index>(config.budget);
  const auto batch_size = static_cast<Eigen::Index>(config.batch_size);

  SeededRng rng(config.seed);
  TraceRecorder recorder(objective, resolve_checkpoints(config.checkpoints, config.budget),
                         false);

  SamplingPolicy policy = config.q0;
  Eigen::Index used = 0;
  while (used < n) {
    const Eigen::Index b = std::min(batch_size, n - used);
    const PointSet batch = sample(policy, rng, b);
    Vector values(b);
    for (Eigen::Index j = 0; j < b; ++j) values[j] = objective(Vector(batch.col(j)));

    for (std::uint64_t c = recorder.pending();
         c != 0 && static_cast<Eigen::Index>(c) < used + b; c = recorder.pending()) {
      const Eigen::Index partial = static_cast<Eigen::Index>(c) - used;
      recorder.record(es_recombine(batch.leftCols(partial), values.head(partial),
                                   config.normalize_es_weights));
    }
    Vector mean = es_recombine(batch, values, config.normalize_es_weights);
    used += b;
    if (recorder.pending() == static_cast<std::uint64_t>(used)) recorder.record(mean);
    policy = IsotropicGaussian(std::move(mean), config.sigma2);
  }
  return std::move(recorder).finish(false);
}

}  // namespace liso
