#pragma once

#include "liso/objectives.hpp"
#include "liso/optimizers.hpp"
#include "liso/report.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liso {

enum class Method { kLiso, kRandomSearch, kAdaptiveLiso, kAdaptiveRandomSearch, kIsotropicEs };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
bool is_adaptive(Method m);

/// Everything needed to rerun one multi-trial comparison.
///
/// Defaults: q0 variance and sigma2 are 1/d; q0 is centred at x* + offset * 1_d with offset 1/sqrt(d) for the static
/// methods and 4/sqrt(d) for the adaptive ones; alpha0 follows the benchmark
/// (1, d/80, d/4); batches of 300 and no mixture.
struct ExperimentSpec {
  std::string objective = "sphere";  ///< benchmark name, or "external"
  std::string external_command;      ///< when objective == "external"
  std::optional<Vector> minimizer;   ///< x*; zero for benchmarks, required otherwise
  int dimension = 2;
  std::vector<Method> methods;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = 100000;
  std::optional<double> alpha0;
  std::optional<double> q0_offset;
  std::optional<double> q0_variance;
  std::optional<double> sigma2;
  double mixture_weight = 0.0;
  std::uint64_t batch_size = 300;
  bool fixed_alpha = false;
  bool normalize_es_weights = true;
  std::optional<Box> projection_box;
  std::uint64_t checkpoint_first = 100;
  std::size_t checkpoint_count = 30;
  std::string title;
  std::string csv_path;
  std::string svg_path;
};

/// Throws InvalidArgument describing the first inconsistency.
void validate(const ExperimentSpec& spec);

std::vector<std::uint64_t> checkpoint_grid(const ExperimentSpec& spec);
Objective make_objective(const ExperimentSpec& spec);
double resolved_alpha0(const ExperimentSpec& spec);
StaticConfig static_config(const ExperimentSpec& spec, std::uint64_t seed);
AdaptiveConfig adaptive_config(const ExperimentSpec& spec, std::uint64_t seed);

/// One trial of one method, with the trial's derived seed.
RunResult run_trial(const ExperimentSpec& spec, Method method, std::uint64_t trial);

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& what, Method method, std::uint64_t trial, std::uint64_t seed)
      : std::runtime_error(what), method_(method), trial_(trial), seed_(seed) {}
  Method method() const noexcept { return method_; }
  std::uint64_t trial() const noexcept { return trial_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  Method method_;
  std::uint64_t trial_;
  std::uint64_t seed_;
};

/// Number of worker threads: LISO_WORKERS if set to a positive integer,
/// otherwise the number of available processors.
std::size_t default_worker_count();

/// Runs every (method, trial) pair on a pool of `workers` threads (0 picks
/// default_worker_count()). Trial t of every method uses the seed
/// trial_seed(spec.seed, t), so methods sharing a sampler see the same
/// stream. Throws ExperimentError for the lowest failing (method, trial).
ExperimentReport run_experiment(const ExperimentSpec& spec, std::size_t workers = 0);

/// Flat JSON object; see README for the keys. Unknown keys are errors.
ExperimentSpec parse_experiment_spec(std::string_view json_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
std::string echo_experiment_spec(const ExperimentSpec& spec);

}  // namespace liso
