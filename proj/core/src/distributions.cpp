#include "liso/distributions.hpp"

#include "liso/errors.hpp"

#include <cmath>
#include <numbers>

namespace liso {

IsotropicGaussian::IsotropicGaussian(Vector mean, double variance)
    : mean_(std::move(mean)), variance_(variance) {
  if (mean_.size() < 1) throw InvalidArgument("gaussian: dimension must be >= 1");
  if (!mean_.allFinite()) throw InvalidArgument("gaussian: mean must be finite");
  if (!(variance_ > 0.0) || !std::isfinite(variance_))
    throw InvalidArgument("gaussian: variance must be positive and finite");
  stddev_ = std::sqrt(variance_);
  log_normalizer_ =
      -0.5 * static_cast<double>(mean_.size()) * std::log(2.0 * std::numbers::pi * variance_);
}

double IsotropicGaussian::log_density(const Eigen::Ref<const Vector>& x) const {
  return log_normalizer_ - (x - mean_).squaredNorm() / (2.0 * variance_);
}

void IsotropicGaussian::draw(SeededRng& rng, Eigen::Ref<Vector> out) const {
  for (Eigen::Index j = 0; j < mean_.size(); ++j) out[j] = mean_[j] + stddev_ * rng.normal();
}

MixturePolicy::MixturePolicy(double weight, IsotropicGaussian adapted, IsotropicGaussian envelope)
    : weight_(weight), adapted_(std::move(adapted)), envelope_(std::move(envelope)) {
  if (!(weight_ >= 0.0 && weight_ <= 1.0))
    throw InvalidArgument("mixture: weight must lie in [0, 1]");
  if (adapted_.dimension() != envelope_.dimension())
    throw InvalidArgument("mixture: component dimensions differ");
}

double MixturePolicy::log_density(const Eigen::Ref<const Vector>& x) const {
  if (weight_ == 0.0) return adapted_.log_density(x);
  if (weight_ == 1.0) return envelope_.log_density(x);
  const double a = std::log1p(-weight_) + adapted_.log_density(x);
  const double b = std::log(weight_) + envelope_.log_density(x);
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

void MixturePolicy::draw(SeededRng& rng, Eigen::Ref<Vector> out) const {
  if (weight_ == 0.0) return adapted_.draw(rng, out);
  if (weight_ == 1.0) return envelope_.draw(rng, out);
  if (rng.uniform() < weight_)
    envelope_.draw(rng, out);
  else
    adapted_.draw(rng, out);
}

double gaussian_log_density(const IsotropicGaussian& g, const Eigen::Ref<const Vector>& x) {
  return g.log_density(x);
}

double mixture_log_density(const MixturePolicy& m, const Eigen::Ref<const Vector>& x) {
  return m.log_density(x);
}

double log_density(const SamplingPolicy& policy, const Eigen::Ref<const Vector>& x) {
  return std::visit([&](const auto& p) { return p.log_density(x); }, policy);
}

int dimension(const SamplingPolicy& policy) {
  return std::visit([](const auto& p) { return p.dimension(); }, policy);
}

PointSet sample(const SamplingPolicy& policy, SeededRng& rng, Eigen::Index count) {
  if (count < 1) throw InvalidArgument("sample: count must be >= 1");
  PointSet out(dimension(policy), count);
  std::visit(
      [&](const auto& p) {
        for (Eigen::Index i = 0; i < count; ++i) p.draw(rng, out.col(i));
      },
      policy);
  return out;
}

}  // namespace liso
