#include "routerq/markov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace routerq {

namespace {

double kahan_sum(const std::vector<double>& v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

MarkovQueueResult finalize(std::vector<double> p, double lambda) {
  const double norm = kahan_sum(p);
  for (double& x : p) x /= norm;
  MarkovQueueResult r;
  double l = 0.0, comp = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double y = static_cast<double>(n) * p[n] - comp;
    const double t = l + y;
    comp = (t - l) - y;
    l = t;
  }
  r.blocking = p.back();
  r.mean_in_system = l;
  r.throughput = lambda * (1.0 - r.blocking);
  r.mean_response = r.throughput > 0.0 ? l / r.throughput : 0.0;
  r.probabilities = std::move(p);
  return r;
}

}  // namespace

MarkovQueueResult mm1n_solve(double lambda, double mu, int capacity) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("mm1n_solve: rates must be > 0");
  if (capacity < 1)
    throw std::invalid_argument("mm1n_solve: capacity must be >= 1");
  const double rho = lambda / mu;
  std::vector<double> p(static_cast<std::size_t>(capacity) + 1);
  if (rho == 1.0) {
    const double u = 1.0 / static_cast<double>(capacity + 1);
    for (double& x : p) x = u;
  } else {
    // p0 = (1 - rho) / (1 - rho^(N+1)); log1p/expm1 keep it stable near
    // rho = 1.
    const double log_rho = std::log1p(rho - 1.0);
    const double denom = -std::expm1((capacity + 1) * log_rho);
    p[0] = (1.0 - rho) / denom;
    for (int n = 1; n <= capacity; ++n)
      p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n) - 1] * rho;
  }
  return finalize(std::move(p), lambda);
}

MarkovQueueResult mmcn_solve(double lambda, double mu, int servers,
                             int capacity) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("mmcn_solve: rates must be > 0");
  if (servers < 1 || servers > capacity)
    throw std::invalid_argument("mmcn_solve: need 1 <= servers <= capacity");
  const double a = lambda / mu;
  const double log_a = std::log(a);
  const double log_c = std::log(static_cast<double>(servers));
  // Birth-death terms in log space; factorials via lgamma so large c stays
  // finite.
  std::vector<double> log_terms(static_cast<std::size_t>(capacity) + 1);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= capacity; ++n) {
    double lt = n * log_a;
    if (n <= servers) {
      lt -= std::lgamma(static_cast<double>(n) + 1.0);
    } else {
      lt -= std::lgamma(static_cast<double>(servers) + 1.0) +
            (n - servers) * log_c;
    }
    log_terms[static_cast<std::size_t>(n)] = lt;
    if (lt > max_log) max_log = lt;
  }
  std::vector<double> p(log_terms.size());
  for (std::size_t n = 0; n < p.size(); ++n)
    p[n] = std::exp(log_terms[n] - max_log);
  return finalize(std::move(p), lambda);
}

double erlang_b(int servers, double offered_load) {
  if (servers < 1 || !(offered_load > 0.0))
    throw std::invalid_argument("erlang_b: invalid parameters");
  double b = 1.0;
  for (int k = 1; k <= servers; ++k)
    b = offered_load * b / (k + offered_load * b);
  return b;
}

double littles_residual(double l, double lambda_eff, double w) {
  const double lw = lambda_eff * w;
  if (l == 0.0 && lw == 0.0) return 0.0;
  return std::abs(l - lw) / std::max(l, 1e-12);
}

double littles_check(const NodeMetrics& report) {
  return littles_residual(report.total.l, report.lambda_eff, report.total.w);
}

}  // namespace routerq
