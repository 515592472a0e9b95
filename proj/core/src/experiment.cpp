#include "liso/experiment.hpp"

#include "liso/errors.hpp"
#include "liso/external_objective.hpp"
#include "liso/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <thread>

namespace liso {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument("experiment: " + message);
}

double offset_for(const ExperimentSpec& spec, Method m) {
  if (spec.q0_offset) return *spec.q0_offset;
  const double root_d = std::sqrt(static_cast<double>(spec.dimension));
  return is_adaptive(m) ? 4.0 / root_d : 1.0 / root_d;
}

Vector minimizer_of(const ExperimentSpec& spec) {
  return spec.minimizer ? *spec.minimizer : Vector::Zero(spec.dimension);
}

IsotropicGaussian initial_policy(const ExperimentSpec& spec, Method m) {
  const double d = spec.dimension;
  const Vector mean = minimizer_of(spec) + Vector::Constant(spec.dimension, offset_for(spec, m));
  return IsotropicGaussian(mean, spec.q0_variance.value_or(1.0 / d));
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kLiso: return "liso";
    case Method::kRandomSearch: return "random_search";
    case Method::kAdaptiveLiso: return "adaptive_liso";
    case Method::kAdaptiveRandomSearch: return "adaptive_random_search";
    case Method::kIsotropicEs: return "isotropic_es";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kLiso, Method::kRandomSearch, Method::kAdaptiveLiso,
                   Method::kAdaptiveRandomSearch, Method::kIsotropicEs})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

bool is_adaptive(Method m) { return m != Method::kLiso && m != Method::kRandomSearch; }

void validate(const ExperimentSpec& spec) {
  require(spec.dimension >= 1, "dimension must be >= 1");
  require(!spec.methods.empty(), "method list is empty");
  require(spec.trials >= 1, "trials must be >= 1");
  require(spec.budget >= 1, "budget must be >= 1");
  require(spec.checkpoint_first >= 1, "checkpoint_first must be >= 1");
  require(spec.checkpoint_count >= 1, "checkpoint_count must be >= 1");
  if (spec.objective == "external") {
    require(!spec.external_command.empty(), "external objective needs external_command");
    require(spec.minimizer.has_value(), "external objective needs a known minimizer");
  } else {
    require(parse_benchmark(spec.objective).has_value(),
            "unknown objective '" + spec.objective + "'");
  }
  if (spec.minimizer) require(spec.minimizer->size() == spec.dimension, "minimizer dimension");
  if (spec.alpha0) require(*spec.alpha0 > 0.0, "alpha0 must be positive");
  if (spec.q0_variance) require(*spec.q0_variance > 0.0, "q0_variance must be positive");
  if (spec.sigma2) require(*spec.sigma2 > 0.0, "sigma2 must be positive");
  require(spec.mixture_weight >= 0.0 && spec.mixture_weight <= 1.0,
          "mixture_weight must lie in [0, 1]");
  require(spec.batch_size >= 1, "batch_size must be >= 1");
  if (std::find(spec.methods.begin(), spec.methods.end(), Method::kIsotropicEs) !=
      spec.methods.end())
    require(spec.batch_size >= 2, "isotropic_es needs batch_size >= 2");
  if (spec.projection_box) {
    require(spec.projection_box->lower.size() == spec.dimension &&
                spec.projection_box->upper.size() == spec.dimension,
            "projection box dimension");
    require((spec.projection_box->lower.array() <= spec.projection_box->upper.array()).all(),
            "projection box is empty");
  }
}

std::vector<std::uint64_t> checkpoint_grid(const ExperimentSpec& spec) {
  return geometric_checkpoints(std::min(spec.checkpoint_first, spec.budget), spec.budget,
                               spec.checkpoint_count);
}

Objective make_objective(const ExperimentSpec& spec) {
  if (spec.objective == "external")
    return make_external_objective(spec.external_command, spec.dimension, minimizer_of(spec));
  const auto b = parse_benchmark(spec.objective);
  require(b.has_value(), "unknown objective '" + spec.objective + "'");
  return make_benchmark(*b, spec.dimension);
}

double resolved_alpha0(const ExperimentSpec& spec) {
  if (spec.alpha0) return *spec.alpha0;
  if (const auto b = parse_benchmark(spec.objective)) return default_alpha0(*b, spec.dimension);
  return 1.0;
}

StaticConfig static_config(const ExperimentSpec& spec, std::uint64_t seed) {
  StaticConfig config;
  config.budget = spec.budget;
  config.alpha0 = resolved_alpha0(spec);
  config.q0 = initial_policy(spec, Method::kLiso);
  config.seed = seed;
  config.alpha_mode = spec.fixed_alpha ? AlphaMode::kFixed : AlphaMode::kScheduled;
  config.checkpoints = checkpoint_grid(spec);
  return config;
}

AdaptiveConfig adaptive_config(const ExperimentSpec& spec, std::uint64_t seed) {
  AdaptiveConfig config;
  config.budget = spec.budget;
  config.alpha0 = resolved_alpha0(spec);
  config.q0 = initial_policy(spec, Method::kAdaptiveLiso);
  config.mixture_weight = spec.mixture_weight;
  config.sigma2 = spec.sigma2.value_or(1.0 / spec.dimension);
  config.batch_size = spec.batch_size;
  config.projection_box = spec.projection_box;
  config.seed = seed;
  config.alpha_mode = spec.fixed_alpha ? AlphaMode::kFixed : AlphaMode::kScheduled;
  config.checkpoints = checkpoint_grid(spec);
  config.normalize_es_weights = spec.normalize_es_weights;
  return config;
}

RunResult run_trial(const ExperimentSpec& spec, Method method, std::uint64_t trial) {
  const std::uint64_t seed = trial_seed(spec.seed, trial);
  Objective objective = make_objective(spec);
  switch (method) {
    case Method::kLiso: return run_liso(objective, static_config(spec, seed));
    case Method::kRandomSearch: return run_random_search(objective, static_config(spec, seed));
    case Method::kAdaptiveLiso: return run_adaptive_liso(objective, adaptive_config(spec, seed));
    case Method::kAdaptiveRandomSearch:
      return run_adaptive_random_search(objective, adaptive_config(spec, seed));
    case Method::kIsotropicEs: return run_isotropic_es(objective, adaptive_config(spec, seed));
  }
  throw InvalidArgument("experiment: unknown method");
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("LISO_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentReport run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  validate(spec);
  const auto started = std::chrono::steady_clock::now();

  // Distinct methods only; a method listed twice would produce duplicate rows.
  std::vector<Method> methods = spec.methods;
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return method_name(a) < method_name(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  const std::size_t trials = static_cast<std::size_t>(spec.trials);
  const std::size_t jobs = methods.size() * trials;
  std::vector<std::vector<double>> errors(jobs);
  std::vector<std::exception_ptr> failures(jobs);
  std::vector<std::uint64_t> grid = checkpoint_grid(spec);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const Method method = methods[job / trials];
      const std::uint64_t trial = job % trials;
      try {
        RunResult result = run_trial(spec, method, trial);
        errors[job] = std::move(result.trace.squared_errors);
      } catch (...) {
        failures[job] = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = default_worker_count();
  workers = std::min(workers, jobs);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t job = 0; job < jobs; ++job) {
    if (!failures[job]) continue;
    const Method method = methods[job / trials];
    const std::uint64_t trial = job % trials;
    const std::uint64_t seed = trial_seed(spec.seed, trial);
    std::string reason;
    try {
      std::rethrow_exception(failures[job]);
    } catch (const std::exception& e) {
      reason = e.what();
    } catch (...) {
      reason = "unknown error";
    }
    throw ExperimentError(std::string(method_name(method)) + " trial " + std::to_string(trial) +
                              " (seed " + std::to_string(seed) + ") failed: " + reason,
                          method, trial, seed);
  }

  ExperimentReport report;
  report.title = spec.title;
  report.base_seed = spec.seed;
  report.std_defined = spec.trials > 1;
  report.spec_echo = echo_experiment_spec(spec);
  for (std::size_t k = 0; k < methods.size(); ++k) {
    std::vector<std::vector<double>> per_trial(errors.begin() + k * trials,
                                               errors.begin() + (k + 1) * trials);
    report.series.push_back(
        aggregate_trials(std::string(method_name(methods[k])), grid, per_trial));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

MethodSeries aggregate_trials(std::string method, const std::vector<std::uint64_t>& checkpoints,
                              const std::vector<std::vector<double>>& squared_errors) {
  if (squared_errors.empty()) throw InvalidArgument("aggregate: no trials");
  for (const auto& trace : squared_errors)
    if (trace.size() != checkpoints.size())
      throw InvalidArgument("aggregate: trace length does not match the checkpoint grid");
  const double t = static_cast<double>(squared_errors.size());
  MethodSeries series;
  series.method = std::move(method);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    double sum = 0.0;
    for (const auto& trace : squared_errors) sum += trace[c];
    const double mean = sum / t;
    double ss = 0.0;
    for (const auto& trace : squared_errors) ss += (trace[c] - mean) * (trace[c] - mean);
    const double sd = squared_errors.size() > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
    series.rows.push_back({checkpoints[c], mean, sd, 1.96 * sd / std::sqrt(t),
                           static_cast<std::uint64_t>(squared_errors.size())});
  }
  return series;
}

}  // namespace liso
