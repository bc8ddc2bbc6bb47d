#include "routerq/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "routerq/config.hpp"
#include "routerq/version.hpp"

namespace routerq {

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

constexpr const char* kClassNames[3] = {"VT", "FF", "total"};
constexpr const char* kMetricNames[4] = {"W", "MQL", "PL", "UTIL"};

}  // namespace

std::vector<CsvRow> report_rows(const MetricsReport& report) {
  std::vector<CsvRow> rows;
  for (const auto& arm : report.arms) {
    if (arm.failed) continue;
    for (std::size_t s = 0; s < report.sweep.size(); ++s) {
      const PointMetrics& pm = arm.points[s];
      for (int k = 0; k < 3; ++k) {
        const MetricCell* cells[4] = {&pm.w[k], &pm.mql[k], &pm.pl[k],
                                      &pm.util[k]};
        for (int m = 0; m < 4; ++m) {
          CsvRow row;
          row.scenario = report.scenario;
          row.arm = arm.arm.label;
          row.lambda1 = report.sweep[s];
          row.klass = kClassNames[k];
          row.metric = kMetricNames[m];
          row.mean = cells[m]->mean;
          row.lo = cells[m]->lo;
          row.hi = cells[m]->hi;
          row.replications = report.replications;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
    return std::tie(a.scenario, a.arm, a.lambda1, a.klass, a.metric) <
           std::tie(b.scenario, b.arm, b.lambda1, b.klass, b.metric);
  });
  return rows;
}

std::string csv_string(const MetricsReport& report) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& row : report_rows(report)) {
    out << row.scenario << ',' << row.arm << ',' << fmt9(row.lambda1) << ','
        << row.klass << ',' << row.metric << ',' << fmt9(row.mean) << ','
        << fmt9(row.lo) << ',' << fmt9(row.hi) << ',' << row.replications
        << "\n";
  }
  return out.str();
}

void emit_csv(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << csv_string(report);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw std::runtime_error("unexpected CSV header in " + path);
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (fields.size() != 9)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 9 fields");
    CsvRow row;
    row.scenario = fields[0];
    row.arm = fields[1];
    row.lambda1 = std::stod(fields[2]);
    row.klass = fields[3];
    row.metric = fields[4];
    row.mean = std::stod(fields[5]);
    row.lo = std::stod(fields[6]);
    row.hi = std::stod(fields[7]);
    row.replications = std::stoi(fields[8]);
    rows.push_back(std::move(row));
  }
  return rows;
}

RunManifest make_manifest(const ScenarioSpec& spec, const MetricsReport& report,
                          std::uint64_t base_seed, double wall_seconds) {
  RunManifest m;
  m.scenario = spec.name;
  m.config_hash = fnv1a64(canonical_config(spec));
  m.base_seed = base_seed;
  m.replications = spec.replications;
  m.wall_seconds = wall_seconds;
  for (const auto& arm : report.arms) {
    const std::size_t rows =
        arm.failed ? 0 : report.sweep.size() * 3 * 4;
    m.arm_rows.emplace_back(arm.arm.label, rows);
  }
  return m;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(manifest.config_hash));
  out << "tool = " << kToolName << " " << kVersion << "\n";
  out << "scenario = " << manifest.scenario << "\n";
  out << "config_hash = " << hash << "\n";
  out << "base_seed = " << manifest.base_seed << "\n";
  out << "replications = " << manifest.replications << "\n";
  std::size_t total = 0;
  for (const auto& [label, rows] : manifest.arm_rows) {
    out << "rows." << label << " = " << rows << "\n";
    total += rows;
  }
  out << "rows_total = " << total << "\n";
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", manifest.wall_seconds);
  out << "wall_seconds = " << wall << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace routerq
