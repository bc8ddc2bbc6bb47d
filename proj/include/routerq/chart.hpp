#pragma once

#include <string>
#include <vector>

#include "routerq/report_io.hpp"

namespace routerq {

// Renders one metric as a standalone SVG line chart: one series per
// arm x class (VT/FF) across the lambda1 sweep, with 95% CI whiskers.
void emit_chart(const std::vector<CsvRow>& rows, const std::string& metric,
                const std::string& path);
void emit_chart(const MetricsReport& report, const std::string& metric,
                const std::string& path);

}  // namespace routerq
