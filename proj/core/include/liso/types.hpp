#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>

namespace liso {

using Vector = Eigen::VectorXd;

/// A set of points in R^d stored one point per column (d x n).
using PointSet = Eigen::MatrixXd;

using ScalarFunction = std::function<double(std::span<const double>)>;

inline std::span<const double> as_span(const Vector& x) noexcept {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace liso
