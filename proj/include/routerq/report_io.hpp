#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "routerq/scenario.hpp"

namespace routerq {

// Stable CSV header:
//   scenario,arm,lambda1,class,metric,mean,ci95_lo,ci95_hi,replications
inline constexpr const char* kCsvHeader =
    "scenario,arm,lambda1,class,metric,mean,ci95_lo,ci95_hi,replications";

struct CsvRow {
  std::string scenario;
  std::string arm;
  double lambda1 = 0.0;
  std::string klass;   // VT, FF, or total
  std::string metric;  // W, MQL, PL, UTIL
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int replications = 0;
};

// Flattens a report into rows sorted by (scenario, arm, lambda1, class,
// metric). Failed arms contribute no rows.
std::vector<CsvRow> report_rows(const MetricsReport& report);

// Deterministic rendering: rows in sorted order, numbers at 9 significant
// digits, so equal reports serialize byte-identically.
std::string csv_string(const MetricsReport& report);
void emit_csv(const MetricsReport& report, const std::string& path);

std::vector<CsvRow> read_csv(const std::string& path);

struct RunManifest {
  std::string scenario;
  std::uint64_t config_hash = 0;
  std::uint64_t base_seed = 0;
  int replications = 0;
  std::vector<std::pair<std::string, std::size_t>> arm_rows;
  double wall_seconds = 0.0;
};

RunManifest make_manifest(const ScenarioSpec& spec, const MetricsReport& report,
                          std::uint64_t base_seed, double wall_seconds);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace routerq
