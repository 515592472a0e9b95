#include "liso/errors.hpp"
#include "liso/format.hpp"
#include "liso/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace liso {
namespace {

constexpr std::string_view kHeader = "method,n_evals,mean_mse,std,ci_half_width,trials";

std::uint64_t parse_count(std::string_view text, std::size_t line) {
  std::uint64_t value = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw ConfigError("csv line " + std::to_string(line) + ": bad integer '" + std::string(text) +
                      "'");
  return value;
}

double parse_real(std::string_view text, std::size_t line) {
  const auto value = parse_double(text);
  if (!value)
    throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + std::string(text) +
                      "'");
  return *value;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_csv(const ExperimentReport& report) {
  std::vector<const MethodSeries*> order;
  for (const auto& s : report.series) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const MethodSeries* a, const MethodSeries* b) { return a->method < b->method; });

  std::string out(kHeader);
  out.push_back('\n');
  for (const MethodSeries* s : order) {
    std::vector<CheckpointStats> rows = s->rows;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.n_evals < b.n_evals; });
    for (const CheckpointStats& r : rows) {
      out += s->method;
      out += ',' + std::to_string(r.n_evals);
      out += ',' + format_double(r.mean_mse);
      out += ',' + format_double(r.std);
      out += ',' + format_double(r.ci_half_width);
      out += ',' + std::to_string(r.trials);
      out.push_back('\n');
    }
  }
  return out;
}

void emit_csv(const ExperimentReport& report, const std::filesystem::path& path) {
  write_file(path, format_csv(report));
}

ExperimentReport parse_csv(std::string_view text) {
  ExperimentReport report;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!seen_header) {
      if (line != kHeader) throw ConfigError("csv: unexpected header '" + std::string(line) + "'");
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6)
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected 6 fields");

    CheckpointStats row;
    row.n_evals = parse_count(fields[1], line_no);
    row.mean_mse = parse_real(fields[2], line_no);
    row.std = parse_real(fields[3], line_no);
    row.ci_half_width = parse_real(fields[4], line_no);
    row.trials = parse_count(fields[5], line_no);

    const std::string method(fields[0]);
    if (report.series.empty() || report.series.back().method != method)
      report.series.push_back({method, {}});
    report.series.back().rows.push_back(row);
  }
  if (!seen_header) throw ConfigError("csv: missing header");
  for (const auto& s : report.series)
    if (!s.rows.empty() && s.rows.front().trials < 2) report.std_defined = false;
  return report;
}

ExperimentReport load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void emit_svg_plot(const ExperimentReport& report, const std::filesystem::path& path) {
  write_file(path, render_svg(report));
}

}  // namespace liso
