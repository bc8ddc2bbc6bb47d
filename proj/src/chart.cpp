#include "routerq/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace routerq {

namespace {

constexpr double kWidth = 960, kHeight = 540;
constexpr double kLeft = 90, kRight = 700, kTop = 48, kBottom = 480;

const char* kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<CsvRow> points;
};

}  // namespace

void emit_chart(const std::vector<CsvRow>& rows, const std::string& metric,
                const std::string& path) {
  if (metric != "W" && metric != "MQL" && metric != "PL" && metric != "UTIL")
    throw std::invalid_argument("emit_chart: unknown metric `" + metric + "`");

  std::set<std::string> scenarios;
  for (const auto& row : rows) scenarios.insert(row.scenario);
  const bool multi = scenarios.size() > 1;

  // One series per arm x class; class `total` stays out of the charts.
  std::map<std::string, Series> series;
  for (const auto& row : rows) {
    if (row.metric != metric) continue;
    if (row.klass != "VT" && row.klass != "FF") continue;
    std::string key = (multi ? row.scenario + "/" : std::string()) + row.arm +
                      " " + row.klass;
    auto& s = series[key];
    s.label = key;
    s.points.push_back(row);
  }
  if (series.empty())
    throw std::invalid_argument("emit_chart: no rows carry metric `" + metric +
                                "`");

  double xmin = 0, xmax = 0, ymax = 0;
  bool first = true;
  std::set<double> xticks;
  for (auto& [key, s] : series) {
    std::sort(s.points.begin(), s.points.end(),
              [](const CsvRow& a, const CsvRow& b) {
                return a.lambda1 < b.lambda1;
              });
    for (const auto& p : s.points) {
      if (first || p.lambda1 < xmin) xmin = p.lambda1;
      if (first || p.lambda1 > xmax) xmax = p.lambda1;
      ymax = std::max({ymax, p.hi, p.mean});
      xticks.insert(p.lambda1);
      first = false;
    }
  }
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;
  if (xmax <= xmin) xmax = xmin + 1.0;

  auto sx = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  auto sy = [&](double y) {
    return kBottom - y / ymax * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  std::string title = metric;
  if (scenarios.size() == 1) title += " (scenario " + *scenarios.begin() + ")";
  svg << "  <text x=\"" << (kLeft + (kRight - kLeft) / 2) << "\" y=\"28\" "
      << "font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">"
      << esc(title) << "</text>\n";

  // Gridlines and y ticks.
  for (int i = 0; i <= 5; ++i) {
    const double yv = ymax * i / 5.0;
    const double y = sy(yv);
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kRight
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "  <text x=\"" << (kLeft - 8) << "\" y=\"" << (y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << num(yv) << "</text>\n";
  }
  // X ticks at the sweep points (thinned if dense).
  std::vector<double> xtick_list(xticks.begin(), xticks.end());
  const std::size_t stride =
      xtick_list.size() > 12 ? (xtick_list.size() + 11) / 12 : 1;
  for (std::size_t i = 0; i < xtick_list.size(); i += stride) {
    const double x = sx(xtick_list[i]);
    svg << "  <line x1=\"" << x << "\" y1=\"" << kBottom << "\" x2=\"" << x
        << "\" y2=\"" << (kBottom + 5) << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << x << "\" y=\"" << (kBottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << num(xtick_list[i]) << "</text>\n";
  }
  // Axes.
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\""
      << kRight << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << (kLeft + (kRight - kLeft) / 2) << "\" y=\""
      << (kBottom + 44)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">lambda1 (packets/s)</text>\n";
  svg << "  <text x=\"24\" y=\"" << (kTop + (kBottom - kTop) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 24 "
      << (kTop + (kBottom - kTop) / 2) << ")\">" << esc(metric)
      << "</text>\n";

  int idx = 0;
  for (const auto& [key, s] : series) {
    const char* color = kPalette[idx % 8];
    const bool dashed = idx >= 8;
    std::ostringstream pts;
    for (const auto& p : s.points)
      pts << sx(p.lambda1) << "," << sy(p.mean) << " ";
    svg << "  <polyline class=\"series\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 3\"" : "")
        << " points=\"" << pts.str() << "\"/>\n";
    for (const auto& p : s.points) {
      const double x = sx(p.lambda1);
      // CI whisker with caps.
      svg << "  <line x1=\"" << x << "\" y1=\"" << sy(p.lo) << "\" x2=\"" << x
          << "\" y2=\"" << sy(p.hi) << "\" stroke=\"" << color << "\"/>\n";
      svg << "  <line x1=\"" << (x - 3) << "\" y1=\"" << sy(p.lo) << "\" x2=\""
          << (x + 3) << "\" y2=\"" << sy(p.lo) << "\" stroke=\"" << color
          << "\"/>\n";
      svg << "  <line x1=\"" << (x - 3) << "\" y1=\"" << sy(p.hi) << "\" x2=\""
          << (x + 3) << "\" y2=\"" << sy(p.hi) << "\" stroke=\"" << color
          << "\"/>\n";
      svg << "  <circle cx=\"" << x << "\" cy=\"" << sy(p.mean)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    // Legend entry.
    const double ly = kTop + 18 * idx;
    svg << "  <line x1=\"" << (kRight + 16) << "\" y1=\"" << ly << "\" x2=\""
        << (kRight + 44) << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"6 3\"" : "") << "/>\n";
    svg << "  <text x=\"" << (kRight + 50) << "\" y=\"" << (ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(s.label)
        << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << svg.str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_chart(const MetricsReport& report, const std::string& metric,
                const std::string& path) {
  emit_chart(report_rows(report), metric, path);
}

}  // namespace routerq
