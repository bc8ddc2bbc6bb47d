#include "routerq/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace routerq {

double t_critical_975(int df) {
  if (df < 1) throw std::invalid_argument("t_critical_975: df must be >= 1");
  static const double table[] = {
      12.706204736, 4.302652730, 3.182446305, 2.776445105, 2.570581836,
      2.446911849,  2.364624251, 2.306004135, 2.262157163, 2.228138852,
      2.200985160,  2.178812830, 2.160368656, 2.144786688, 2.131449546,
      2.119905299,  2.109815578, 2.100922040, 2.093024054, 2.085963447,
      2.079613845,  2.073873068, 2.068657610, 2.063898562, 2.059538553,
      2.055529439,  2.051830516, 2.048407142, 2.045229642, 2.042272456};
  if (df <= 30) return table[df - 1];
  // Cornish-Fisher expansion around the normal quantile; error < 1e-4 for
  // df > 30.
  const double z = 1.959963985;
  const double z3 = z * z * z, z5 = z3 * z * z, z7 = z5 * z * z;
  const double d = static_cast<double>(df);
  return z + (z3 + z) / (4.0 * d) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * d * d) +
         (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * d * d * d);
}

MetricCell summarize(const std::vector<double>& values) {
  MetricCell cell;
  const std::size_t n = values.size();
  if (n == 0) return cell;
  double sum = 0.0;
  for (double v : values) sum += v;
  cell.mean = sum / static_cast<double>(n);
  if (n < 2) {
    cell.lo = cell.hi = cell.mean;
    return cell;
  }
  double ss = 0.0;
  for (double v : values) {
    const double d = v - cell.mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);
  const double half = t_critical_975(static_cast<int>(n) - 1) *
                      std::sqrt(var / static_cast<double>(n));
  cell.lo = cell.mean - half;
  cell.hi = cell.mean + half;
  return cell;
}

}  // namespace routerq
