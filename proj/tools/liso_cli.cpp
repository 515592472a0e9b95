// liso: command-line front end.
//
//   liso optimize --fn sphere --d 2 --method liso --n 1000 --seed 7
//   liso optimize --external "python3 my_model.py" --d 3 --method adaptive_liso --n 3000
//   liso bench --config configs/sphere_static_d4.json --out-dir results
//   liso oracle --fn quad-cubic --alpha 16
//   liso oracle --fn quad-cubic --alphas 4,8,16,32,64
//   liso slope --csv results/sphere_static_d4.csv --method liso --from 1000 --to 100000

#include "liso/errors.hpp"
#include "liso/experiment.hpp"
#include "liso/external_objective.hpp"
#include "liso/format.hpp"
#include "liso/oracle.hpp"
#include "liso/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

/// Bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const liso::Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += liso::format_double(v[i]);
  }
  return out;
}

struct OptimizeArgs {
  std::string fn;
  std::string external;
  int dimension = 0;
  std::string method = "liso";
  std::uint64_t budget = 1000;
  std::uint64_t seed = 0;
  std::optional<double> alpha0;
  bool fixed_alpha = false;
  double q0_mean = 0.0;
  std::optional<double> q0_variance;
  std::optional<double> sigma2;
  double mixture_weight = 0.0;
  std::uint64_t batch_size = 300;
};

int run_optimize(const OptimizeArgs& args) {
  using namespace liso;
  if (args.dimension < 1) throw UsageError("--d must be >= 1");
  if (args.fn.empty() == args.external.empty())
    throw UsageError("give exactly one of --fn or --external");
  const auto method = parse_method(args.method);
  if (!method) throw UsageError("unknown method '" + args.method + "'");

  std::optional<Benchmark> bench;
  if (!args.fn.empty()) {
    bench = parse_benchmark(args.fn);
    if (!bench) throw UsageError("unknown function '" + args.fn + "'");
  }
  Objective objective = bench ? make_benchmark(*bench, args.dimension)
                              : make_external_objective(args.external, args.dimension);

  const double d = args.dimension;
  const IsotropicGaussian q0(Vector::Constant(args.dimension, args.q0_mean),
                             args.q0_variance.value_or(1.0 / d));
  const double alpha0 = args.alpha0.value_or(bench ? default_alpha0(*bench, args.dimension) : 1.0);
  const AlphaMode mode = args.fixed_alpha ? AlphaMode::kFixed : AlphaMode::kScheduled;

  RunResult result;
  if (!is_adaptive(*method)) {
    StaticConfig config;
    config.budget = args.budget;
    config.alpha0 = alpha0;
    config.q0 = q0;
    config.seed = args.seed;
    config.alpha_mode = mode;
    result = *method == Method::kLiso ? run_liso(objective, config)
                                      : run_random_search(objective, config);
  } else {
    AdaptiveConfig config;
    config.budget = args.budget;
    config.alpha0 = alpha0;
    config.q0 = q0;
    config.mixture_weight = args.mixture_weight;
    config.sigma2 = args.sigma2.value_or(1.0 / d);
    config.batch_size = args.batch_size;
    config.seed = args.seed;
    config.alpha_mode = mode;
    switch (*method) {
      case Method::kAdaptiveLiso: result = run_adaptive_liso(objective, config); break;
      case Method::kAdaptiveRandomSearch:
        result = run_adaptive_random_search(objective, config);
        break;
      default: result = run_isotropic_es(objective, config); break;
    }
  }
  const std::uint64_t used = objective.evaluations();
  const double value = objective(result.estimate);
  std::cout << "estimate " << join(result.estimate) << '\n'
            << "value " << format_double(value) << '\n'
            << "evaluations " << used << '\n';
  if (result.trace.final_degenerate)
    std::cout << "warning all importance weights vanished; estimate is the best sample\n";
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> trials;
  std::size_t workers = 0;
};

int run_bench(const BenchArgs& args) {
  using namespace liso;
  namespace fs = std::filesystem;
  ExperimentSpec spec;
  try {
    spec = load_experiment_spec(args.config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (args.trials) {
    if (*args.trials < 1) throw UsageError("--trials must be >= 1");
    spec.trials = *args.trials;
  }
  const std::string stem = fs::path(args.config).stem().string();
  const fs::path out_dir = args.out_dir.empty() ? fs::current_path() : fs::path(args.out_dir);
  fs::create_directories(out_dir);
  const auto resolve = [&](const std::string& p, const char* ext) {
    const fs::path path = p.empty() ? fs::path(stem + ext) : fs::path(p);
    return path.is_absolute() ? path : out_dir / path;
  };
  const fs::path csv = resolve(spec.csv_path, ".csv");
  const fs::path svg = resolve(spec.svg_path, ".svg");

  const ExperimentReport report = run_experiment(spec, args.workers);
  emit_csv(report, csv);
  emit_svg_plot(report, svg);

  std::cout << "wrote " << csv.string() << " and " << svg.string() << " (" << spec.trials
            << " trials, " << report.wall_seconds << " s)\n";
  for (const auto& s : report.series) {
    const auto& last = s.rows.back();
    std::cout << s.method << " n=" << last.n_evals << " mean_mse=" << format_double(last.mean_mse)
              << " ci=" << format_double(last.ci_half_width) << '\n';
  }
  return 0;
}

struct OracleArgs {
  std::string fn;
  int dimension = 1;
  std::optional<double> alpha;
  std::vector<double> alphas;
  std::optional<double> lower;
  std::optional<double> upper;
  int grid_points = 1601;
};

int run_oracle(const OracleArgs& args) {
  using namespace liso;
  const auto fn = oracle_function(args.fn);
  if (!fn) throw UsageError("unknown oracle function '" + args.fn + "'");
  if (args.dimension < 1 || args.dimension > 2) throw UsageError("--d must be 1 or 2");
  if (args.alpha.has_value() == !args.alphas.empty())
    throw UsageError("give exactly one of --alpha or --alphas");

  QuadratureSpec spec;
  spec.box.assign(static_cast<std::size_t>(args.dimension),
                  Interval{args.lower.value_or(fn->default_interval.lower),
                           args.upper.value_or(fn->default_interval.upper)});
  spec.grid_points = args.grid_points;

  if (args.alpha) {
    spec.alpha = *args.alpha;
    const GibbsMean gm = gibbs_mean(fn->f, spec);
    const GibbsNormalizer z = gibbs_normalizer(fn->f, spec);
    std::cout << "mean " << join(gm.mean) << '\n'
              << "log_normalizer " << format_double(z.log_value()) << '\n'
              << "refinement_delta " << format_double(gm.refinement_delta) << '\n'
              << "converged " << (gm.converged ? "yes" : "no") << '\n';
    return gm.converged ? 0 : kRuntimeError;
  }
  const std::vector<double> gaps =
      laplace_gap(fn->f, Vector::Zero(args.dimension), spec, args.alphas);
  for (std::size_t i = 0; i < gaps.size(); ++i)
    std::cout << "alpha " << format_double(args.alphas[i]) << " gap " << format_double(gaps[i])
              << '\n';
  if (gaps.size() >= 2) {
    const SlopeFit fit = fit_loglog(args.alphas, gaps);
    std::cout << "slope " << format_double(fit.slope) << '\n';
  }
  return 0;
}

struct SlopeArgs {
  std::string csv;
  std::string method;
  std::uint64_t first = 1;
  std::uint64_t last = std::numeric_limits<std::uint64_t>::max();
};

int run_slope(const SlopeArgs& args) {
  using namespace liso;
  ExperimentReport report;
  try {
    report = load_csv(args.csv);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  const SlopeFit fit = fit_loglog_slope(report, args.method, args.first, args.last);
  std::cout << "slope " << format_double(fit.slope) << '\n'
            << "intercept " << format_double(fit.intercept) << '\n'
            << "r2 " << format_double(fit.r_squared) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace importance sampling optimization toolkit"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Run one optimizer on one objective");
  optimize->add_option("--fn", opt.fn, "Benchmark: sphere, rastrigin or ackley");
  optimize->add_option("--external", opt.external, "Shell command speaking the line protocol");
  optimize->add_option("--d", opt.dimension, "Dimension")->required();
  optimize->add_option("--method", opt.method,
                       "liso, random_search, adaptive_liso, adaptive_random_search, isotropic_es");
  optimize->add_option("--n", opt.budget, "Evaluation budget")->check(CLI::PositiveNumber);
  optimize->add_option("--seed", opt.seed, "Random seed");
  optimize->add_option("--alpha0", opt.alpha0, "Initial temperature")->check(CLI::PositiveNumber);
  optimize->add_flag("--fixed-alpha", opt.fixed_alpha, "Keep alpha = alpha0 instead of annealing");
  optimize->add_option("--q0-mean", opt.q0_mean, "Every coordinate of the q0 mean");
  optimize->add_option("--q0-var", opt.q0_variance, "q0 variance (default 1/d)")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--sigma2", opt.sigma2, "Adaptive Gaussian variance (default 1/d)")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--lambda", opt.mixture_weight, "Mixture weight of q0")
      ->check(CLI::Range(0.0, 1.0));
  optimize->add_option("--batch", opt.batch_size, "Adaptive batch size")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a multi-trial experiment from a config file");
  bench_cmd->add_option("--config", bench.config, "Experiment config (JSON)")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for relative output paths");
  bench_cmd->add_option("--trials", bench.trials, "Override the number of trials");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (default: LISO_WORKERS or all)");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Gibbs mean or Laplace gap by quadrature");
  oracle_cmd->add_option("--fn", oracle.fn,
                         "quadratic, quad-cubic, quartic, sphere, rastrigin, ackley")
      ->required();
  oracle_cmd->add_option("--d", oracle.dimension, "Dimension (1 or 2)");
  oracle_cmd->add_option("--alpha", oracle.alpha, "Temperature")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--alphas", oracle.alphas, "Temperatures for the Laplace gap")
      ->delimiter(',');
  oracle_cmd->add_option("--lower", oracle.lower, "Box lower bound on every axis");
  oracle_cmd->add_option("--upper", oracle.upper, "Box upper bound on every axis");
  oracle_cmd->add_option("--m", oracle.grid_points, "Grid points per axis (odd)");

  SlopeArgs slope;
  auto* slope_cmd = app.add_subcommand("slope", "Fit a log-log slope to a report CSV");
  slope_cmd->add_option("--csv", slope.csv, "Report CSV")->required();
  slope_cmd->add_option("--method", slope.method, "Method name")->required();
  slope_cmd->add_option("--from", slope.first, "Smallest n_evals in the fit");
  slope_cmd->add_option("--to", slope.last, "Largest n_evals in the fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "liso: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*optimize) return run_optimize(opt);
    if (*bench_cmd) return run_bench(bench);
    if (*oracle_cmd) return run_oracle(oracle);
    if (*slope_cmd) return run_slope(slope);
  } catch (const UsageError& e) {
    std::cerr << "liso: " << e.what() << '\n';
    return kUsageError;
  } catch (const liso::InvalidArgument& e) {
    std::cerr << "liso: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "liso: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
