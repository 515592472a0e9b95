#pragma once

#include "liso/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liso {

// Brute-force Gibbs-measure quantities by composite Simpson quadrature on a
// tensor grid, for d <= 2. The Gibbs measure at temperature alpha has density
// proportional to exp(-alpha f) on the box. Integrands are formed as
// exp(-alpha (f - min_grid f)), so nothing underflows and the shift cancels in
// every ratio.

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct QuadratureSpec {
  std::vector<Interval> box;  ///< one interval per dimension
  int grid_points = 1601;     ///< per dimension; odd, >= 3
  double alpha = 1.0;
};

/// [-8, 8]^d with 1601 points per axis.
QuadratureSpec default_quadrature(int dimension, double alpha);

struct GibbsNormalizer {
  double shifted_integral = 0.0;  ///< integral of exp(-alpha (f - log_shift))
  double log_shift = 0.0;         ///< min of f over the grid
  double alpha = 0.0;

  /// log of the unshifted normalizer, log(shifted_integral) - alpha * log_shift.
  double log_value() const;
};

GibbsNormalizer gibbs_normalizer(const ScalarFunction& f, const QuadratureSpec& spec);

struct GibbsMean {
  Vector mean;                    ///< at the requested grid size m
  double refinement_delta = 0.0;  ///< ||mean(m) - mean(2m - 1)||
  bool converged = false;         ///< refinement_delta <= kRefinementTolerance
};

inline constexpr double kRefinementTolerance = 1e-6;

/// Mean of the Gibbs measure on the box, with a grid-doubling self-check.
/// Throws OracleError when the smallest grid value sits on the box boundary
/// (the measure wants to leave the box) or the integrand is not finite.
GibbsMean gibbs_mean(const ScalarFunction& f, const QuadratureSpec& spec);

/// ||gibbs_mean(f, alpha) - minimizer|| for each alpha, on the box and grid of
/// `base`. Throws OracleError if any mean fails the refinement check.
std::vector<double> laplace_gap(const ScalarFunction& f, const Vector& minimizer,
                                const QuadratureSpec& base, std::span<const double> alphas);

/// Named test functions for the oracle, with the box they are meant for.
struct OracleFunction {
  std::string name;
  ScalarFunction f;
  Interval default_interval;  ///< applied to every axis
};

/// "quadratic" sum x^2, "quad-cubic" sum x^2 + 0.2 x^3 (box [-4, 4]: the
/// cubic is unbounded below, and the grid must stay in the basin of 0),
/// "quartic" sum x^2 + x^4, and the benchmarks "sphere", "rastrigin", "ackley".
std::optional<OracleFunction> oracle_function(std::string_view name);
std::vector<std::string_view> oracle_function_names();

}  // namespace liso
