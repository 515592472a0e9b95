#include "liso/errors.hpp"
#include "liso/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace liso {
namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 620.0;  // plot area right edge; legend beyond
constexpr double kTop = 50.0;
constexpr double kBottom = 470.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct PlotPoint {
  double n;
  double mean;
  double lower;
  double upper;
};

struct LogAxis {
  int lo_decade;
  int hi_decade;
  double from;
  double to;

  double map(double v) const {
    const double t = (std::log10(v) - lo_decade) / static_cast<double>(hi_decade - lo_decade);
    return from + t * (to - from);
  }
};

LogAxis make_axis(double min_value, double max_value, double from, double to) {
  int lo = static_cast<int>(std::floor(std::log10(min_value)));
  int hi = static_cast<int>(std::ceil(std::log10(max_value)));
  if (hi <= lo) hi = lo + 1;
  return {lo, hi, from, to};
}

std::string decade_label(int e) {
  return "10<tspan dy=\"-7\" font-size=\"10\">" + std::to_string(e) + "</tspan>";
}

}  // namespace

std::string render_svg(const ExperimentReport& report) {
  if (report.series.empty()) throw InvalidArgument("render_svg: report has no methods");

  std::vector<const MethodSeries*> order;
  for (const auto& s : report.series) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const MethodSeries* a, const MethodSeries* b) { return a->method < b->method; });

  std::vector<std::vector<PlotPoint>> points(order.size());
  std::size_t dropped = 0;
  double floor_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto& row : order[k]->rows) {
      if (!(row.mean_mse > 0.0) || !std::isfinite(row.mean_mse) || row.n_evals == 0) {
        ++dropped;
        continue;
      }
      points[k].push_back({static_cast<double>(row.n_evals), row.mean_mse,
                           row.mean_mse - row.ci_half_width, row.mean_mse + row.ci_half_width});
      floor_value = std::min(floor_value, row.mean_mse);
      if (row.mean_mse - row.ci_half_width > 0.0)
        floor_value = std::min(floor_value, row.mean_mse - row.ci_half_width);
    }
  }

  double n_min = std::numeric_limits<double>::infinity(), n_max = 0.0;
  double y_max = 0.0;
  for (auto& series : points) {
    for (auto& p : series) {
      if (!(p.lower > 0.0)) p.lower = floor_value;
      n_min = std::min(n_min, p.n);
      n_max = std::max(n_max, p.n);
      y_max = std::max(y_max, p.upper);
    }
  }
  const bool empty = !(n_max > 0.0);
  if (empty) {
    n_min = 1.0;
    n_max = 10.0;
    floor_value = 1.0;
    y_max = 10.0;
  }
  const LogAxis x_axis = make_axis(n_min, n_max, kLeft, kRight);
  const LogAxis y_axis = make_axis(floor_value, y_max, kBottom, kTop);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" +
         fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
         "\" fill=\"white\"/>\n";
  const std::string title = report.title.empty() ? "Mean squared error" : report.title;
  svg += "<text x=\"" + fixed((kLeft + kRight) / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-size=\"16\">" + escape(title) + "</text>\n";

  // Frame, grid and decade ticks.
  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" +
         fixed(kRight - kLeft) + "\" height=\"" + fixed(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = x_axis.lo_decade; e <= x_axis.hi_decade; ++e) {
    const std::string x = fixed(x_axis.map(std::pow(10.0, e)));
    svg += "<line x1=\"" + x + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + x + "\" y2=\"" +
           fixed(kBottom) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + fixed(kBottom + 22) + "\" text-anchor=\"middle\">" +
           decade_label(e) + "</text>\n";
  }
  for (int e = y_axis.lo_decade; e <= y_axis.hi_decade; ++e) {
    const std::string y = fixed(y_axis.map(std::pow(10.0, e)));
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + y + "\" x2=\"" + fixed(kRight) + "\" y2=\"" +
           y + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + y + "\" text-anchor=\"end\" "
           "dominant-baseline=\"middle\">" + decade_label(e) + "</text>\n";
  }
  svg += "<text x=\"" + fixed((kLeft + kRight) / 2) + "\" y=\"" + fixed(kHeight - 20) +
         "\" text-anchor=\"middle\">function evaluations n</text>\n";
  svg += "<text x=\"22\" y=\"" + fixed((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 22 " + fixed((kTop + kBottom) / 2) +
         ")\">mean squared error</text>\n";

  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& series = points[k];
    if (series.empty()) continue;
    const char* color = kPalette[k % kPalette.size()];
    const std::string method = escape(order[k]->method);

    std::string band;
    for (const auto& p : series)
      band += fixed(x_axis.map(p.n)) + "," + fixed(y_axis.map(p.upper)) + " ";
    for (auto it = series.rbegin(); it != series.rend(); ++it)
      band += fixed(x_axis.map(it->n)) + "," + fixed(y_axis.map(it->lower)) + " ";
    band.pop_back();
    svg += "<polygon class=\"band\" data-method=\"" + method + "\" points=\"" + band +
           "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";

    std::string line;
    for (const auto& p : series)
      line += fixed(x_axis.map(p.n)) + "," + fixed(y_axis.map(p.mean)) + " ";
    line.pop_back();
    svg += "<polyline class=\"mean\" data-method=\"" + method + "\" points=\"" + line +
           "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
  }

  // Legend.
  double legend_y = kTop + 10;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    svg += "<rect x=\"" + fixed(kRight + 20) + "\" y=\"" + fixed(legend_y - 6) +
           "\" width=\"18\" height=\"4\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + fixed(kRight + 44) + "\" y=\"" + fixed(legend_y) +
           "\" dominant-baseline=\"middle\">" + escape(order[k]->method) + "</text>\n";
    legend_y += 20;
  }
  svg += "<text x=\"" + fixed(kRight + 20) + "\" y=\"" + fixed(legend_y + 4) +
         "\" font-size=\"10\">band: mean &#177; 1.96 s/&#8730;trials</text>\n";
  if (dropped > 0) {
    svg += "<text class=\"warning\" x=\"" + fixed(kRight + 20) + "\" y=\"" + fixed(legend_y + 24) +
           "\" font-size=\"10\" fill=\"#b00000\">" + std::to_string(dropped) +
           " checkpoint(s) with nonpositive MSE omitted</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace liso
