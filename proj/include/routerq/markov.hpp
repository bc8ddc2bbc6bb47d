#pragma once

#include <vector>

#include "routerq/node.hpp"

namespace routerq {

// Closed-form solution of a finite-capacity Markovian queue; used to
// validate the simulator in the SCV = 1 degenerate cases.
struct MarkovQueueResult {
  std::vector<double> probabilities;  // p_0 .. p_N
  double blocking = 0.0;              // p_N
  double mean_in_system = 0.0;        // L
  double throughput = 0.0;            // lambda * (1 - p_N)
  double mean_response = 0.0;         // W = L / throughput
};

MarkovQueueResult mm1n_solve(double lambda, double mu, int capacity);
MarkovQueueResult mmcn_solve(double lambda, double mu, int servers,
                             int capacity);

// Erlang-B loss probability for `servers` lines at offered load a = lambda/mu.
double erlang_b(int servers, double offered_load);

// Relative Little's-law residual |L - lambda_eff * W| / max(L, eps); returns
// 0 when both sides are zero (idle system).
double littles_check(const NodeMetrics& report);
double littles_residual(double l, double lambda_eff, double w);

}  // namespace routerq
