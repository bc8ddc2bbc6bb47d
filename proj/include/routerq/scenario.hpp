#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "routerq/network.hpp"
#include "routerq/stats.hpp"

namespace routerq {

// One configuration arm of a scenario (a line family in the result charts).
struct ArmSpec {
  std::string label;
  Discipline discipline = Discipline::HOL;
  SecurityMode security = SecurityMode::Off;
  int servers = 4;
  double scv_a1 = 4.0;  // arrival SCV, class 0 (VT)
  double scv_a2 = 4.0;  // arrival SCV, class 1 (FF)
};

struct ScenarioSpec {
  std::string name;  // "A".."D" or a custom name
  std::vector<double> lambda1_sweep;  // packets/s, class 0
  double lambda2 = 5e5;               // packets/s, class 1
  double mu = 17e5;                   // service rate per server
  double scv_s = 4.0;                 // service SCV, all classes
  int capacity = 50;                  // N
  int replications = 20;              // R
  std::uint64_t arrivals_per_replication = 1000000;
  double warmup_fraction = 0.1;
  double accept_prob = 1.0;      // post-ACL acceptance p
  double acl_rate_factor = 2.0;  // ACL service rate = factor * mu
  double acl_scv = 4.0;
  std::vector<ArmSpec> arms;

  void validate() const;
};

// The four experiment grids, fully parameterized: lambda1 swept over
// {1..10}x10^5 packets/s, lambda2 = 5x10^5, mu = 17x10^5, N = 50, R = 20.
std::vector<ScenarioSpec> builtin_scenarios();

// Case-sensitive lookup by name ("A".."D"); nullptr-free: throws on miss.
ScenarioSpec builtin_scenario(const std::string& name);
bool is_builtin_scenario(const std::string& name);

// Metric values for one (arm, sweep point), aggregated over replications.
// Class index 0 = VT, 1 = FF, 2 = total.
struct PointMetrics {
  MetricCell w[3];
  MetricCell mql[3];
  MetricCell pl[3];
  MetricCell util[3];
};

struct ArmResult {
  ArmSpec arm;
  bool failed = false;
  std::string error;
  std::vector<PointMetrics> points;  // parallel to the sweep
  double max_little_residual = 0.0;  // across replications and nodes
};

struct MetricsReport {
  std::string scenario;
  std::vector<double> sweep;
  int replications = 0;
  std::uint64_t base_seed = 0;
  std::vector<ArmResult> arms;
};

RouterConfig make_router_config(const ScenarioSpec& spec, const ArmSpec& arm);
std::vector<ArrivalStream> make_streams(const ScenarioSpec& spec,
                                        const ArmSpec& arm, double lambda1);

// Seed for replication `rep` of sweep point `sweep` of arm `arm`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t arm,
                               std::size_t sweep, std::size_t rep);

// Runs every (arm, sweep point) for `replications` seeded replications and
// aggregates mean and 95% CI per metric. Replications may execute on up to
// `parallelism` threads; aggregation order is fixed, so the report is
// bit-identical for any thread count. A failing arm is reported in place
// without aborting the others.
MetricsReport run_scenario(const ScenarioSpec& spec, std::uint64_t base_seed,
                           int parallelism = 1);

}  // namespace routerq
