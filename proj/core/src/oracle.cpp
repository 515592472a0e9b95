#include "liso/oracle.hpp"

#include "liso/errors.hpp"
#include "liso/objectives.hpp"

#include <cmath>
#include <limits>

namespace liso {
namespace {

void validate(const QuadratureSpec& spec) {
  const auto d = spec.box.size();
  if (d < 1 || d > 2) throw InvalidArgument("quadrature: dimension must be 1 or 2");
  if (spec.grid_points < 3 || spec.grid_points % 2 == 0)
    throw InvalidArgument("quadrature: grid_points must be odd and >= 3");
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))
    throw InvalidArgument("quadrature: alpha must be positive");
  for (const Interval& iv : spec.box)
    if (!(iv.lower < iv.upper) || !std::isfinite(iv.lower) || !std::isfinite(iv.upper))
      throw InvalidArgument("quadrature: box must be a nonempty finite interval per axis");
}

/// Objective values on the tensor grid plus 1-D nodes and Simpson weights.
struct Grid {
  int m = 0;
  std::size_t d = 0;
  std::vector<std::vector<double>> nodes;    // per axis
  std::vector<std::vector<double>> weights;  // per axis
  std::vector<double> values;                // row-major over axes
  double min_value = std::numeric_limits<double>::infinity();
  double min_interior = std::numeric_limits<double>::infinity();
  double min_boundary = std::numeric_limits<double>::infinity();
};

Grid evaluate_grid(const ScalarFunction& f, const std::vector<Interval>& box, int m) {
  Grid g;
  g.m = m;
  g.d = box.size();
  for (const Interval& iv : box) {
    const double h = (iv.upper - iv.lower) / (m - 1);
    std::vector<double> x(static_cast<std::size_t>(m));
    std::vector<double> w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      x[static_cast<std::size_t>(i)] = (i == m - 1) ? iv.upper : iv.lower + i * h;
      const double c = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w[static_cast<std::size_t>(i)] = c * h / 3.0;
    }
    g.nodes.push_back(std::move(x));
    g.weights.push_back(std::move(w));
  }

  const std::size_t total = g.d == 1 ? static_cast<std::size_t>(m)
                                     : static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  g.values.resize(total);
  double point[2];
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t i = g.d == 1 ? k : k / static_cast<std::size_t>(m);
    const std::size_t j = g.d == 1 ? 0 : k % static_cast<std::size_t>(m);
    point[0] = g.nodes[0][i];
    if (g.d == 2) point[1] = g.nodes[1][j];
    const double v = f(std::span<const double>(point, g.d));
    if (!std::isfinite(v))
      throw OracleError("quadrature: non-finite integrand at grid node " + std::to_string(k));
    g.values[k] = v;
    const auto last = static_cast<std::size_t>(m - 1);
    const bool boundary = i == 0 || i == last || (g.d == 2 && (j == 0 || j == last));
    double& slot = boundary ? g.min_boundary : g.min_interior;
    slot = std::min(slot, v);
    g.min_value = std::min(g.min_value, v);
  }
  return g;
}

struct Moments {
  double mass = 0.0;
  Vector first;
};

Moments integrate(const Grid& g, double alpha) {
  Moments out;
  out.first = Vector::Zero(static_cast<Eigen::Index>(g.d));
  const auto m = static_cast<std::size_t>(g.m);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const std::size_t i = g.d == 1 ? k : k / m;
    const std::size_t j = g.d == 1 ? 0 : k % m;
    double w = g.weights[0][i];
    if (g.d == 2) w *= g.weights[1][j];
    const double e = w * std::exp(-alpha * (g.values[k] - g.min_value));
    out.mass += e;
    out.first[0] += e * g.nodes[0][i];
    if (g.d == 2) out.first[1] += e * g.nodes[1][j];
  }
  return out;
}

Vector mean_at(const ScalarFunction& f, const QuadratureSpec& spec, int m) {
  const Grid g = evaluate_grid(f, spec.box, m);
  if (g.min_boundary < g.min_interior)
    throw OracleError(
        "quadrature: the minimum over the grid lies on the box boundary, so the Gibbs measure "
        "is not contained in the box; enlarge or recentre the box");
  const Moments mom = integrate(g, spec.alpha);
  if (!(mom.mass > 0.0) || !std::isfinite(mom.mass))
    throw OracleError("quadrature: normalizer underflow; enlarge the box");
  return mom.first / mom.mass;
}

double sum_of(std::span<const double> x, double (*term)(double)) {
  double s = 0.0;
  for (double v : x) s += term(v);
  return s;
}

}  // namespace

QuadratureSpec default_quadrature(int dimension, double alpha) {
  QuadratureSpec spec;
  spec.box.assign(static_cast<std::size_t>(dimension), Interval{-8.0, 8.0});
  spec.grid_points = 1601;
  spec.alpha = alpha;
  return spec;
}

double GibbsNormalizer::log_value() const { return std::log(shifted_integral) - alpha * log_shift; }

GibbsNormalizer gibbs_normalizer(const ScalarFunction& f, const QuadratureSpec& spec) {
  validate(spec);
  const Grid g = evaluate_grid(f, spec.box, spec.grid_points);
  const Moments mom = integrate(g, spec.alpha);
  if (!std::isfinite(mom.mass)) throw OracleError("quadrature: normalizer is not finite");
  return {mom.mass, g.min_value, spec.alpha};
}

GibbsMean gibbs_mean(const ScalarFunction& f, const QuadratureSpec& spec) {
  validate(spec);
  GibbsMean out;
  out.mean = mean_at(f, spec, spec.grid_points);
  const Vector refined = mean_at(f, spec, 2 * spec.grid_points - 1);
  out.refinement_delta = (out.mean - refined).norm();
  out.converged = out.refinement_delta <= kRefinementTolerance;
  return out;
}

std::vector<double> laplace_gap(const ScalarFunction& f, const Vector& minimizer,
                                const QuadratureSpec& base, std::span<const double> alphas) {
  if (minimizer.size() != static_cast<Eigen::Index>(base.box.size()))
    throw InvalidArgument("laplace_gap: minimizer dimension does not match the box");
  for (std::size_t k = 0; k < base.box.size(); ++k) {
    const auto x = minimizer[static_cast<Eigen::Index>(k)];
    if (!(x > base.box[k].lower && x < base.box[k].upper))
      throw InvalidArgument("laplace_gap: minimizer must lie inside the box");
  }
  std::vector<double> gaps;
  for (double alpha : alphas) {
    QuadratureSpec spec = base;
    spec.alpha = alpha;
    const GibbsMean gm = gibbs_mean(f, spec);
    if (!gm.converged)
      throw OracleError("laplace_gap: quadrature did not converge at alpha = " +
                        std::to_string(alpha) + " (delta " + std::to_string(gm.refinement_delta) +
                        "); increase grid_points");
    gaps.push_back((gm.mean - minimizer).norm());
  }
  return gaps;
}

std::optional<OracleFunction> oracle_function(std::string_view name) {
  if (name == "quadratic")
    return OracleFunction{"quadratic",
                          [](std::span<const double> x) {
                            return sum_of(x, [](double v) { return v * v; });
                          },
                          {-8.0, 8.0}};
  if (name == "quad-cubic")
    return OracleFunction{"quad-cubic",
                          [](std::span<const double> x) {
                            return sum_of(x, [](double v) { return v * v + 0.2 * v * v * v; });
                          },
                          {-4.0, 4.0}};
  if (name == "quartic")
    return OracleFunction{"quartic",
                          [](std::span<const double> x) {
                            return sum_of(x, [](double v) { return v * v + v * v * v * v; });
                          },
                          {-8.0, 8.0}};
  if (name == "sphere") return OracleFunction{"sphere", sphere, {-8.0, 8.0}};
  if (name == "rastrigin") return OracleFunction{"rastrigin", rastrigin, {-8.0, 8.0}};
  if (name == "ackley") return OracleFunction{"ackley", ackley, {-8.0, 8.0}};
  return std::nullopt;
}

std::vector<std::string_view> oracle_function_names() {
  return {"quadratic", "quad-cubic", "quartic", "sphere", "rastrigin", "ackley"};
}

}  // namespace liso
