#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace liso {

/// Statistics of ||x_n - x*||^2 over trials at one evaluation count.
struct CheckpointStats {
  std::uint64_t n_evals = 0;
  double mean_mse = 0.0;
  double std = 0.0;            ///< sample standard deviation (n - 1 denominator)
  double ci_half_width = 0.0;  ///< 1.96 std / sqrt(trials)
  std::uint64_t trials = 0;

  friend bool operator==(const CheckpointStats&, const CheckpointStats&) = default;
};

struct MethodSeries {
  std::string method;
  std::vector<CheckpointStats> rows;  ///< ascending n_evals

  friend bool operator==(const MethodSeries&, const MethodSeries&) = default;
};

struct ExperimentReport {
  std::string title;
  std::vector<MethodSeries> series;  ///< sorted by method name
  /// False when trials == 1: std is then undefined and reported as 0.
  bool std_defined = true;
  std::uint64_t base_seed = 0;
  double wall_seconds = 0.0;
  std::string spec_echo;  ///< the experiment spec as JSON
};

/// Folds per-trial squared-error traces (outer index = trial) into statistics.
/// Summation runs in trial-index order, so the result does not depend on the
/// order in which trials finished.
MethodSeries aggregate_trials(std::string method, const std::vector<std::uint64_t>& checkpoints,
                              const std::vector<std::vector<double>>& squared_errors);

// CSV: header `method,n_evals,mean_mse,std,ci_half_width,trials`, one row per
// (method, checkpoint) sorted by method then n_evals, '\n' line ends, floats
// as shortest round-trip decimals.

std::string format_csv(const ExperimentReport& report);
void emit_csv(const ExperimentReport& report, const std::filesystem::path& path);
/// Numeric fields only; title and metadata are not part of the CSV.
ExperimentReport parse_csv(std::string_view text);
ExperimentReport load_csv(const std::filesystem::path& path);

/// Self-contained log-log SVG: one mean polyline per method with a shaded
/// 95% band. Checkpoints with nonpositive mean MSE are dropped and noted.
std::string render_svg(const ExperimentReport& report);
void emit_svg_plot(const ExperimentReport& report, const std::filesystem::path& path);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log y against log x. Needs >= 2 points, all positive.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log(mean MSE) against log(n_evals) for one method over
/// n_evals in [first, last]. Needs >= 5 checkpoints with positive MSE.
SlopeFit fit_loglog_slope(const ExperimentReport& report, std::string_view method,
                          std::uint64_t first, std::uint64_t last);

}  // namespace liso
