#include "liso/errors.hpp"
#include "liso/report.hpp"

#include <cmath>

namespace liso {

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_loglog: need at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("fit_loglog: values must be positive to take logarithms");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    const double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("fit_loglog: x values are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

SlopeFit fit_loglog_slope(const ExperimentReport& report, std::string_view method,
                          std::uint64_t first, std::uint64_t last) {
  const MethodSeries* series = nullptr;
  for (const auto& s : report.series)
    if (s.method == method) series = &s;
  if (series == nullptr)
    throw InvalidArgument("fit_loglog_slope: no method '" + std::string(method) + "' in report");
  std::vector<double> x, y;
  for (const auto& row : series->rows) {
    if (row.n_evals < first || row.n_evals > last) continue;
    if (!(row.mean_mse > 0.0))
      throw InvalidArgument("fit_loglog_slope: nonpositive mean MSE at n = " +
                            std::to_string(row.n_evals));
    x.push_back(static_cast<double>(row.n_evals));
    y.push_back(row.mean_mse);
  }
  if (x.size() < 5)
    throw InvalidArgument("fit_loglog_slope: need at least 5 checkpoints in range, found " +
                          std::to_string(x.size()));
  return fit_loglog(x, y);
}

}  // namespace liso
