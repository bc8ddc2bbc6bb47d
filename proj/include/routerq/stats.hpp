#pragma once

#include <vector>

namespace routerq {

struct MetricCell {
  double mean = 0.0;
  double lo = 0.0;  // 95% CI lower bound
  double hi = 0.0;  // 95% CI upper bound

  bool overlaps(const MetricCell& other) const {
    return lo <= other.hi && other.lo <= hi;
  }
};

// Two-sided 95% Student-t critical value (0.975 quantile) for `df` degrees
// of freedom.
double t_critical_975(int df);

// Sample mean with a 95% Student-t confidence interval (df = n - 1). A
// single observation yields a degenerate interval [mean, mean].
MetricCell summarize(const std::vector<double>& values);

}  // namespace routerq
