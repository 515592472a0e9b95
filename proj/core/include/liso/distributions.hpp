#pragma once

#include "liso/rng.hpp"
#include "liso/types.hpp"

#include <variant>

namespace liso {

/// N(mean, variance * I_d).
class IsotropicGaussian {
 public:
  IsotropicGaussian(Vector mean, double variance);

  const Vector& mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  int dimension() const noexcept { return static_cast<int>(mean_.size()); }

  double log_density(const Eigen::Ref<const Vector>& x) const;

  /// Writes one draw into `out`, consuming dimension() normals from `rng`.
  void draw(SeededRng& rng, Eigen::Ref<Vector> out) const;

 private:
  Vector mean_;
  double variance_;
  double stddev_;
  double log_normalizer_;  // -(d/2) log(2 pi variance)
};

/// (1 - weight) * adapted + weight * envelope.
///
/// The envelope term guarantees density(x) >= weight * envelope.density(x),
/// so a positive weight keeps every point of the envelope's support in play
/// however far the adapted component drifts.
class MixturePolicy {
 public:
  MixturePolicy(double weight, IsotropicGaussian adapted, IsotropicGaussian envelope);

  double weight() const noexcept { return weight_; }
  const IsotropicGaussian& adapted() const noexcept { return adapted_; }
  const IsotropicGaussian& envelope() const noexcept { return envelope_; }
  int dimension() const noexcept { return adapted_.dimension(); }

  /// log((1-w) e^a + w e^b) by max-shifted log-sum-exp. Exactly the adapted
  /// log-density at w = 0 and exactly the envelope's at w = 1.
  double log_density(const Eigen::Ref<const Vector>& x) const;

  /// Picks a component with one uniform variate, then draws from it. At
  /// w = 0 or w = 1 no selection variate is consumed, so the stream matches
  /// sampling the surviving component directly.
  void draw(SeededRng& rng, Eigen::Ref<Vector> out) const;

 private:
  double weight_;
  IsotropicGaussian adapted_;
  IsotropicGaussian envelope_;
};

using SamplingPolicy = std::variant<IsotropicGaussian, MixturePolicy>;

double gaussian_log_density(const IsotropicGaussian& g, const Eigen::Ref<const Vector>& x);
double mixture_log_density(const MixturePolicy& m, const Eigen::Ref<const Vector>& x);

double log_density(const SamplingPolicy& policy, const Eigen::Ref<const Vector>& x);
int dimension(const SamplingPolicy& policy);

/// `count` independent draws, one per column of the returned d x count matrix.
PointSet sample(const SamplingPolicy& policy, SeededRng& rng, Eigen::Index count);

}  // namespace liso
