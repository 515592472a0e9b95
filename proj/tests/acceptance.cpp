// Acceptance suite. `acceptance N` checks criterion N; without arguments every
// criterion runs. Each prints one line, "C<N> PASS ..." or "C<N> FAIL ...",
// and the exit status is nonzero if any checked criterion failed.
#include "liso/errors.hpp"
#include "liso/estimators.hpp"
#include "liso/experiment.hpp"
#include "liso/objectives.hpp"
#include "liso/optimizers.hpp"
#include "liso/oracle.hpp"
#include "liso/report.hpp"
#include "liso/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace liso;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. Benchmark values at the origin and at the hand-derived spot points.
void benchmark_exactness(Verdict& v) {
  double worst_origin = 0.0;
  for (int d : {1, 2, 4, 8, 12}) {
    const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
    for (auto* fn : {&sphere, &rastrigin, &ackley})
      worst_origin = std::max(worst_origin, std::abs(fn(origin)));
  }
  v.check(worst_origin <= 1e-12, "origin value " + num(worst_origin));
  const double r = rastrigin(std::vector<double>{1.0, 0.0});
  v.check(std::abs(r - 24.0) <= 1e-12, "rastrigin(1,0) = " + num(r));
  const double a = ackley(std::vector<double>{0.5});
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12f", a);
  v.check(std::abs(a - 4.253662) <= 1e-6,
          std::string("ackley(0.5) = ") + buf + ", target 4.253662 +/- 1e-6");
  v.detail << "max |f(0)| = " << num(worst_origin) << ", rastrigin(1,0) = " << num(r)
           << ", ackley(0.5) = " << buf;
}

// 2. Additive shifts of the objective values leave the estimate unchanged.
void shift_invariance(Verdict& v) {
  SeededRng rng(2);
  const int n = 200, d = 5;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    PointSet pts(d, n);
    Vector values(n), logq(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) pts(k, i) = 0.5 + rng.normal();
      values[i] = pts.col(i).squaredNorm();
      logq[i] = -0.5 * (pts.col(i).array() - 0.5).square().sum() - 0.5 * d * std::log(2 * M_PI);
    }
    const double alpha = 0.5 + 4.5 * rng.uniform();
    auto estimate = [&](double c) {
      WeightedEnsemble e(d, n);
      for (Eigen::Index i = 0; i < n; ++i) e.append(pts.col(i), values[i] + c, logq[i]);
      e.reweight(alpha, n);
      return Vector(e.weighted_average());
    };
    const Vector base = estimate(0.0);
    for (double c : {1.0, -1.0, 1e6, -1e6}) worst = std::max(worst, (estimate(c) - base).norm());
  }
  v.check(worst < 1e-10, "largest change " + num(worst));
  v.detail << "largest change over 50 ensembles x 4 shifts = " << num(worst);
}

// 3. Normalized weights form a probability vector; the estimate stays in the hull.
void weight_sanity(Verdict& v) {
  SeededRng rng(3);
  int bad_sum = 0, bad_sign = 0, bad_hull = 0, non_finite = 0, extreme = 0;
  double worst_sum = 0.0;
  for (int inst = 0; inst < 1000; ++inst) {
    const bool big = inst % 4 == 0;
    extreme += big;
    const int n = 1 + static_cast<int>(rng.next_u64() % 500);
    const int d = 1 + static_cast<int>(rng.next_u64() % 8);
    PointSet pts(d, n);
    Vector values(n), logq(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) pts(k, i) = 3.0 * rng.normal();
      values[i] = big ? 1e4 * (1.0 + rng.uniform()) : 10.0 * rng.uniform();
      logq[i] = -10.0 * rng.uniform();
    }
    const double alpha = big ? 1e3 : 0.01 + 20.0 * rng.uniform();
    const Vector lw = laplace_log_weights(alpha, values, logq);
    const Vector p = normalized_weights(lw);
    const Vector est = self_normalized_average(pts, lw);
    if (!p.allFinite() || !est.allFinite()) ++non_finite;
    if (p.minCoeff() < 0.0) ++bad_sign;
    worst_sum = std::max(worst_sum, std::abs(p.sum() - 1.0));
    if (std::abs(p.sum() - 1.0) > 1e-12) ++bad_sum;
    for (Eigen::Index k = 0; k < d; ++k)
      if (est[k] < pts.row(k).minCoeff() - 1e-12 || est[k] > pts.row(k).maxCoeff() + 1e-12) {
        ++bad_hull;
        break;
      }
  }
  v.check(non_finite == 0, std::to_string(non_finite) + " non-finite");
  v.check(bad_sign == 0, std::to_string(bad_sign) + " negative weights");
  v.check(bad_sum == 0, std::to_string(bad_sum) + " sums off by > 1e-12");
  v.check(bad_hull == 0, std::to_string(bad_hull) + " outside the hull");
  v.detail << "1000 instances (" << extreme << " at alpha = 1e3, |f| ~ 1e4), max |sum p - 1| = "
           << num(worst_sum);
}

// 4. Static LISO agrees with the quadrature mean of the Gibbs measure.
void oracle_equivalence(Verdict& v) {
  const double alpha = 16.0;
  const std::uint64_t n = 100000;
  auto f = [](std::span<const double> x) {
    return std::abs(x[0]) > 4.0 ? kInf : x[0] * x[0] + 0.2 * x[0] * x[0] * x[0];
  };
  QuadratureSpec q;
  q.box = {{-4.0, 4.0}};
  q.alpha = alpha;
  const GibbsMean truth = gibbs_mean(f, q);
  v.check(truth.converged, "quadrature did not converge");

  int agree = 0;
  std::ostringstream rows;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    StaticConfig cfg;
    cfg.budget = n;
    cfg.alpha0 = alpha;
    cfg.alpha_mode = AlphaMode::kFixed;
    cfg.q0 = IsotropicGaussian(Vector::Zero(1), 1.0);
    cfg.seed = seed;
    cfg.checkpoints = {n};
    Objective obj("quad-cubic", 1, f, Vector::Zero(1));
    const RunResult r = run_liso(obj, cfg);

    SeededRng rng(seed);
    const PointSet pts = sample(cfg.q0, rng, static_cast<Eigen::Index>(n));
    Vector values(pts.cols()), logq(pts.cols());
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      const double x = pts(0, i);
      values[i] = f(std::span<const double>(&x, 1));
      logq[i] = log_density(cfg.q0, pts.col(i));
    }
    const Vector lw = laplace_log_weights(alpha, values, logq);
    v.check(std::abs(self_normalized_average(pts, lw)[0] - r.estimate[0]) < 1e-12,
            "rebuilt ensemble differs from the run");
    SeededRng boot(1000 + seed);
    const double se = bootstrap_standard_error(pts, lw, 200, boot)[0];
    const double z = std::abs(r.estimate[0] - truth.mean[0]) / se;
    agree += z <= 3.0;
    rows << " seed " << seed << ": z = " << num(z) << ";";
  }
  v.check(agree >= 4, std::to_string(agree) + "/5 within 3 SE");
  v.detail << "quadrature mean " << num(truth.mean[0]) << "," << rows.str() << " " << agree
           << "/5 within 3 bootstrap SE";
}

// 5. The Gibbs mean approaches the minimizer like 1/alpha.
void laplace_decay(Verdict& v) {
  const std::vector<double> alphas{4, 8, 16, 32, 64};
  QuadratureSpec base;
  base.box = {{-4.0, 4.0}};
  const auto cubic = laplace_gap(
      [](std::span<const double> x) { return x[0] * x[0] + 0.2 * x[0] * x[0] * x[0]; },
      Vector::Zero(1), base, alphas);
  bool decreasing = true;
  for (std::size_t i = 1; i < cubic.size(); ++i) decreasing = decreasing && cubic[i] < cubic[i - 1];
  const double slope = fit_loglog(alphas, cubic).slope;
  v.check(decreasing, "gap not decreasing");
  v.check(slope <= -0.8, "slope " + num(slope));

  QuadratureSpec wide;
  wide.box = {{-8.0, 8.0}};
  const auto quad =
      laplace_gap([](std::span<const double> x) { return x[0] * x[0]; }, Vector::Zero(1), wide, alphas);
  const double worst = *std::max_element(quad.begin(), quad.end());
  v.check(worst < 1e-8, "quadratic gap " + num(worst));
  v.detail << "cubic gaps";
  for (double g : cubic) v.detail << " " << num(g);
  v.detail << ", slope " << num(slope) << ", max quadratic gap " << num(worst);
}

ExperimentReport run_spec(ExperimentSpec spec) { return run_experiment(spec, 0); }

const MethodSeries& series_of(const ExperimentReport& r, std::string_view method) {
  for (const auto& s : r.series)
    if (s.method == method) return s;
  throw std::runtime_error("missing method");
}

// 6. Empirical convergence rates of static LISO and random search.
void rate_reproduction(Verdict& v) {
  ExperimentSpec spec;
  spec.objective = "sphere";
  spec.dimension = 4;
  spec.methods = {Method::kLiso, Method::kRandomSearch};
  spec.trials = 100;
  spec.budget = 100000;
  spec.seed = 6;
  const ExperimentReport report = run_spec(spec);
  const double liso = fit_loglog_slope(report, "liso", 1000, 100000).slope;
  const double rs = fit_loglog_slope(report, "random_search", 1000, 100000).slope;
  const double liso_final = series_of(report, "liso").rows.back().mean_mse;
  const double rs_final = series_of(report, "random_search").rows.back().mean_mse;
  v.check(liso >= -0.87 && liso <= -0.47, "LISO slope " + num(liso));
  v.check(rs >= -0.70 && rs <= -0.30, "RS slope " + num(rs));
  v.check(liso_final < rs_final, "final MSE ordering");
  v.detail << "LISO slope " << num(liso) << " (want [-0.87, -0.47]), RS slope " << num(rs)
           << " (want [-0.70, -0.30]), final MSE " << num(liso_final) << " vs " << num(rs_final);
}

// 7. Adaptive LISO beats adaptive random search from a far start.
void adaptive_ordering(Verdict& v) {
  ExperimentSpec spec;
  spec.objective = "sphere";
  spec.dimension = 4;
  spec.methods = {Method::kAdaptiveLiso, Method::kAdaptiveRandomSearch};
  spec.trials = 20;
  spec.budget = 90000;
  spec.seed = 7;
  const ExperimentReport report = run_spec(spec);
  const auto& al = series_of(report, "adaptive_liso");
  const auto& ars = series_of(report, "adaptive_random_search");
  const double initial = al.rows.front().mean_mse;
  const double final_al = al.rows.back().mean_mse;
  const double final_ars = ars.rows.back().mean_mse;
  v.check(final_al < final_ars, "adaptive LISO not below adaptive RS");
  v.check(final_al < 0.01 * initial, "final not below 1% of initial");
  v.detail << "adaptive LISO MSE " << num(initial) << " at n = " << al.rows.front().n_evals
           << " -> " << num(final_al) << ", adaptive RS final " << num(final_ars);
}

// 8. Recombination weights against direct evaluation of the formula.
void es_weights(Verdict& v) {
  double worst = 0.0;
  for (std::uint64_t b : {2u, 4u, 300u}) {
    const auto w = isotropic_es_recombination_weights(b);
    v.check(w.parents == b / 2, "parent count at B = " + std::to_string(b));
    v.check(w.weights.size() == static_cast<Eigen::Index>(b / 2), "weight count");
    v.check(w.weights.minCoeff() > 0.0, "nonpositive weight at B = " + std::to_string(b));
    for (std::size_t i = 1; i <= b / 2; ++i) {
      const double direct = std::log((b + 1.0) / 2.0) - std::log(static_cast<double>(i));
      worst = std::max(worst, std::abs(w.weights[static_cast<Eigen::Index>(i - 1)] - direct));
    }
  }
  v.check(worst <= 1e-6, "deviation " + num(worst));
  v.detail << "B in {2, 4, 300}, max deviation " << num(worst);
}

// 9. Bit-determinism and exact budgets for every driver.
void determinism_and_budget(Verdict& v) {
  const int d = 3;
  const std::uint64_t budget = 4321;
  StaticConfig sc;
  sc.budget = budget;
  sc.seed = 9;
  sc.q0 = IsotropicGaussian(Vector::Constant(d, 0.6), 1.0 / d);
  AdaptiveConfig ac;
  ac.budget = budget;
  ac.seed = 9;
  ac.q0 = IsotropicGaussian(Vector::Constant(d, 2.3), 1.0 / d);
  ac.sigma2 = 1.0 / d;
  ac.mixture_weight = 0.05;
  const std::vector<std::pair<const char*, std::function<RunResult(Objective&)>>> drivers = {
      {"liso", [&](Objective& f) { return run_liso(f, sc); }},
      {"random_search", [&](Objective& f) { return run_random_search(f, sc); }},
      {"adaptive_liso", [&](Objective& f) { return run_adaptive_liso(f, ac); }},
      {"adaptive_random_search", [&](Objective& f) { return run_adaptive_random_search(f, ac); }},
      {"isotropic_es", [&](Objective& f) { return run_isotropic_es(f, ac); }}};
  for (const auto& [name, run] : drivers) {
    for (Benchmark b : {Benchmark::kSphere, Benchmark::kRastrigin, Benchmark::kAckley}) {
      Objective f = make_benchmark(b, d), g = make_benchmark(b, d);
      const RunResult x = run(f), y = run(g);
      const std::string tag = std::string(name) + "/" + std::string(benchmark_name(b));
      v.check(x.trace.checkpoints == y.trace.checkpoints && x.trace.estimates == y.trace.estimates &&
                  x.trace.squared_errors == y.trace.squared_errors &&
                  (x.trace.ess.size() == y.trace.ess.size() &&
                   std::equal(x.trace.ess.begin(), x.trace.ess.end(), y.trace.ess.begin(),
                              [](double a, double c) {
                                return a == c || (std::isnan(a) && std::isnan(c));
                              })),
              tag + " trace differs");
      v.check(f.evaluations() == budget && g.evaluations() == budget, tag + " evaluation count");
    }
  }
  v.detail << "5 drivers x 3 benchmarks, budget " << budget << ", two runs each";
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t m = x.size() / 2;
  return x.size() % 2 ? x[m] : 0.5 * (x[m - 1] + x[m]);
}

// 10. CSV round trip, SVG determinism and the 1/sqrt(trials) confidence band.
void harness_contracts(Verdict& v) {
  ExperimentSpec spec;
  spec.objective = "sphere";
  spec.dimension = 2;
  spec.methods = {Method::kLiso, Method::kRandomSearch};
  spec.budget = 10000;
  spec.seed = 10;
  spec.trials = 20;
  const ExperimentReport small = run_spec(spec);
  const ExperimentReport again = run_spec(spec);
  spec.trials = 80;
  const ExperimentReport large = run_spec(spec);

  bool round_trip = true;
  for (const ExperimentReport* r : {&small, &large}) {
    const ExperimentReport back = parse_csv(format_csv(*r));
    round_trip = round_trip && back.series == r->series && format_csv(back) == format_csv(*r);
  }
  v.check(round_trip, "CSV round trip");
  v.check(render_svg(small) == render_svg(again) && format_csv(small) == format_csv(again),
          "SVG/CSV bytes differ between identical runs");

  v.detail << "CSV round trip " << (round_trip ? "exact" : "broken") << "; CI shrink 20->80:";
  for (const auto& method : {"liso", "random_search"}) {
    std::vector<double> hw20, hw80;
    for (const auto& row : series_of(small, method).rows) hw20.push_back(row.ci_half_width);
    for (const auto& row : series_of(large, method).rows) hw80.push_back(row.ci_half_width);
    const double factor = median(hw20) / median(hw80);
    v.check(factor >= 1.6 && factor <= 2.6, std::string(method) + " factor " + num(factor));
    v.detail << " " << method << " " << num(factor);
  }
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Verdict&);
};

constexpr Criterion kCriteria[] = {
    {1, "benchmark exactness", benchmark_exactness},
    {2, "self-normalization invariance", shift_invariance},
    {3, "weight sanity", weight_sanity},
    {4, "oracle equivalence", oracle_equivalence},
    {5, "Laplace-principle decay", laplace_decay},
    {6, "rate reproduction", rate_reproduction},
    {7, "adaptive ordering", adaptive_ordering},
    {8, "ES weight formula", es_weights},
    {9, "determinism and budget", determinism_and_budget},
    {10, "harness contracts", harness_contracts},
};

bool run_criterion(const Criterion& c) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << "[exception: " << e.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("C%d %s %s: %s (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.title,
              v.detail.str().c_str(), secs);
  std::fflush(stdout);
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  bool all_passed = true;
  if (argc > 1) {
    const int id = std::atoi(argv[1]);
    for (const Criterion& c : kCriteria)
      if (c.id == id) return run_criterion(c) ? 0 : 1;
    std::fprintf(stderr, "acceptance: unknown criterion '%s'\n", argv[1]);
    return 2;
  }
  for (const Criterion& c : kCriteria) all_passed = run_criterion(c) && all_passed;
  return all_passed ? 0 : 1;
}
