#include "liso/objectives.hpp"

#include "liso/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace liso {

Objective::Objective(std::string name, int dimension, ScalarFunction evaluator,
                     std::optional<Vector> known_minimizer)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::move(evaluator)),
      minimizer_(std::move(known_minimizer)) {
  if (dimension_ < 1) throw InvalidArgument("objective dimension must be >= 1");
  if (!evaluator_) throw InvalidArgument("objective evaluator is empty");
  if (minimizer_ && minimizer_->size() != dimension_)
    throw InvalidArgument("known minimizer has wrong dimension");
}

Objective::Objective(Objective&& other) noexcept
    : name_(std::move(other.name_)),
      dimension_(other.dimension_),
      evaluator_(std::move(other.evaluator_)),
      minimizer_(std::move(other.minimizer_)),
      evaluations_(other.evaluations_.load()) {}

Objective& Objective::operator=(Objective&& other) noexcept {
  name_ = std::move(other.name_);
  dimension_ = other.dimension_;
  evaluator_ = std::move(other.evaluator_);
  minimizer_ = std::move(other.minimizer_);
  evaluations_.store(other.evaluations_.load());
  return *this;
}

double Objective::evaluate(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dimension_)
    throw InvalidArgument("objective '" + name_ + "' expects dimension " +
                          std::to_string(dimension_) + ", got " + std::to_string(x.size()));
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  const double value = evaluator_(x);
  if (std::isnan(value) || value == -std::numeric_limits<double>::infinity())
    throw EvaluationError("objective '" + name_ + "' returned " + std::to_string(value));
  return value;
}

namespace {

void check_input(std::span<const double> x, const char* fn) {
  if (x.empty()) throw InvalidArgument(std::string(fn) + ": empty input");
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidArgument(std::string(fn) + ": non-finite input");
}

}  // namespace

double sphere(std::span<const double> x) {
  check_input(x, "sphere");
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum;
}

double rastrigin(std::span<const double> x) {
  check_input(x, "rastrigin");
  double sum = 10.0 * static_cast<double>(x.size());
  for (double v : x) sum += 4.0 * v * v - 10.0 * std::cos(std::numbers::pi * v);
  return sum;
}

double ackley(std::span<const double> x) {
  check_input(x, "ackley");
  const double d = static_cast<double>(x.size());
  double squares = 0.0;
  double cosines = 0.0;
  for (double v : x) {
    squares += v * v;
    cosines += std::cos(2.0 * std::numbers::pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(squares / d)) - std::exp(cosines / d) + 20.0 +
         std::numbers::e;
}

std::optional<Benchmark> parse_benchmark(std::string_view name) {
  if (name == "sphere") return Benchmark::kSphere;
  if (name == "rastrigin") return Benchmark::kRastrigin;
  if (name == "ackley") return Benchmark::kAckley;
  return std::nullopt;
}

std::string_view benchmark_name(Benchmark b) {
  switch (b) {
    case Benchmark::kSphere: return "sphere";
    case Benchmark::kRastrigin: return "rastrigin";
    case Benchmark::kAckley: return "ackley";
  }
  return "unknown";
}

std::vector<std::string_view> benchmark_names() { return {"sphere", "rastrigin", "ackley"}; }

Objective make_benchmark(Benchmark b, int dimension) {
  ScalarFunction fn;
  switch (b) {
    case Benchmark::kSphere: fn = sphere; break;
    case Benchmark::kRastrigin: fn = rastrigin; break;
    case Benchmark::kAckley: fn = ackley; break;
  }
  if (dimension < 1) throw InvalidArgument("benchmark dimension must be >= 1");
  return Objective(std::string(benchmark_name(b)), dimension, std::move(fn),
                   Vector::Zero(dimension));
}

double default_alpha0(Benchmark b, int dimension) {
  switch (b) {
    case Benchmark::kSphere: return 1.0;
    case Benchmark::kRastrigin: return dimension / 80.0;
    case Benchmark::kAckley: return dimension / 4.0;
  }
  return 1.0;
}

}  // namespace liso
