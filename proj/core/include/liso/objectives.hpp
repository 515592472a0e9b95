#pragma once

#include "liso/types.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace liso {

/// A scalar objective on R^d with an evaluation counter.
///
/// Every call to evaluate() increments the counter by one, whether or not the
/// value turns out to be usable, so all optimizers are compared on the number
/// of times the underlying function actually ran.
///
/// Returned values are finite or +inf. +inf is the zero-weight sentinel: it
/// lets an evaluator encode an infeasible point as an infinite penalty.
/// NaN and -inf raise EvaluationError.
class Objective {
 public:
  Objective(std::string name, int dimension, ScalarFunction evaluator,
            std::optional<Vector> known_minimizer = std::nullopt);

  Objective(Objective&& other) noexcept;
  Objective& operator=(Objective&& other) noexcept;
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  double evaluate(std::span<const double> x);
  double operator()(const Vector& x) { return evaluate(as_span(x)); }

  const std::string& name() const noexcept { return name_; }
  int dimension() const noexcept { return dimension_; }
  const std::optional<Vector>& known_minimizer() const noexcept { return minimizer_; }
  std::uint64_t evaluations() const noexcept { return evaluations_.load(std::memory_order_relaxed); }

 private:
  std::string name_;
  int dimension_;
  ScalarFunction evaluator_;
  std::optional<Vector> minimizer_;
  std::atomic<std::uint64_t> evaluations_{0};
};

// Benchmark functions. All have their unique global minimum 0 at the origin.
// Non-finite or empty input throws InvalidArgument.

/// sum x_i^2
double sphere(std::span<const double> x);

/// 10 d + sum [4 x_i^2 - 10 cos(pi x_i)]
///
/// Not the textbook Rastrigin (x_i^2 - 10 cos(2 pi x_i)): the bowl is 4 x_i^2
/// and the cosine has period 2. The shipped configs and alpha0 defaults
/// assume this variant.
double rastrigin(std::span<const double> x);

/// -20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e
double ackley(std::span<const double> x);

enum class Benchmark { kSphere, kRastrigin, kAckley };

std::optional<Benchmark> parse_benchmark(std::string_view name);
std::string_view benchmark_name(Benchmark b);
std::vector<std::string_view> benchmark_names();

/// Counting objective for a benchmark in dimension d, with x* = 0.
Objective make_benchmark(Benchmark b, int dimension);

/// Default initial temperature:
/// 1 for sphere, d/80 for rastrigin, d/4 for ackley.
double default_alpha0(Benchmark b, int dimension);

}  // namespace liso
