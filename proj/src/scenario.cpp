#include "routerq/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "routerq/markov.hpp"

namespace routerq {

void ScenarioSpec::validate() const {
  if (lambda1_sweep.empty())
    throw std::invalid_argument("ScenarioSpec: sweep must be non-empty");
  for (double l1 : lambda1_sweep)
    if (!(l1 > 0.0))
      throw std::invalid_argument("ScenarioSpec: sweep rates must be > 0");
  if (!(lambda2 > 0.0))
    throw std::invalid_argument("ScenarioSpec: lambda2 must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("ScenarioSpec: mu must be > 0");
  if (!(scv_s >= 1.0) || !(acl_scv >= 1.0))
    throw std::invalid_argument("ScenarioSpec: service SCV must be >= 1");
  if (capacity < 1)
    throw std::invalid_argument("ScenarioSpec: capacity must be >= 1");
  if (replications < 1)
    throw std::invalid_argument("ScenarioSpec: replications must be >= 1");
  if (arrivals_per_replication == 0)
    throw std::invalid_argument(
        "ScenarioSpec: arrivals_per_replication must be > 0");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw std::invalid_argument(
        "ScenarioSpec: warmup_fraction must be in [0,1)");
  if (!(accept_prob >= 0.0 && accept_prob <= 1.0))
    throw std::invalid_argument("ScenarioSpec: accept_prob must be in [0,1]");
  if (!(acl_rate_factor > 0.0))
    throw std::invalid_argument("ScenarioSpec: acl_rate_factor must be > 0");
  if (arms.empty())
    throw std::invalid_argument("ScenarioSpec: at least one arm required");
  for (const auto& arm : arms) {
    if (arm.label.empty())
      throw std::invalid_argument("ScenarioSpec: arm label must be non-empty");
    // servers <= capacity is enforced per arm at run time by NodeConfig, so
    // one bad arm fails in place instead of aborting the whole scenario.
    if (arm.servers < 1)
      throw std::invalid_argument("ScenarioSpec: servers must be >= 1");
    if (!(arm.scv_a1 >= 1.0) || !(arm.scv_a2 >= 1.0))
      throw std::invalid_argument("ScenarioSpec: arrival SCV must be >= 1");
  }
}

namespace {

std::vector<double> default_sweep() {
  std::vector<double> sweep;
  for (int i = 1; i <= 10; ++i) sweep.push_back(i * 1e5);
  return sweep;
}

ScenarioSpec base_spec(std::string name) {
  ScenarioSpec spec;
  spec.name = std::move(name);
  spec.lambda1_sweep = default_sweep();
  return spec;
}

ArmSpec make_arm(std::string label, Discipline d, SecurityMode sec,
                 int servers, double scv_a) {
  ArmSpec arm;
  arm.label = std::move(label);
  arm.discipline = d;
  arm.security = sec;
  arm.servers = servers;
  arm.scv_a1 = scv_a;
  arm.scv_a2 = scv_a;
  return arm;
}

}  // namespace

std::vector<ScenarioSpec> builtin_scenarios() {
  std::vector<ScenarioSpec> all;

  // A: FCFS vs HOL, security off, quad CPU.
  ScenarioSpec a = base_spec("A");
  a.arms = {make_arm("FCFS-SEC=OFF", Discipline::FCFS, SecurityMode::Off, 4, 4.0),
            make_arm("HOL-SEC=OFF", Discipline::HOL, SecurityMode::Off, 4, 4.0)};
  all.push_back(std::move(a));

  // B: arrival-SCV sensitivity at 5 and 10, security on and off.
  ScenarioSpec b = base_spec("B");
  b.arms = {
      make_arm("HOL-SEC=OFF-SCVA=5", Discipline::HOL, SecurityMode::Off, 4, 5.0),
      make_arm("HOL-SEC=ON-SCVA=5", Discipline::HOL, SecurityMode::On, 4, 5.0),
      make_arm("HOL-SEC=OFF-SCVA=10", Discipline::HOL, SecurityMode::Off, 4, 10.0),
      make_arm("HOL-SEC=ON-SCVA=10", Discipline::HOL, SecurityMode::On, 4, 10.0)};
  all.push_back(std::move(b));

  // C: single vs quad CPU.
  ScenarioSpec c = base_spec("C");
  c.arms = {make_arm("HOL-SEC=OFF-C=1", Discipline::HOL, SecurityMode::Off, 1, 4.0),
            make_arm("HOL-SEC=OFF-C=4", Discipline::HOL, SecurityMode::Off, 4, 4.0)};
  all.push_back(std::move(c));

  // D: security off vs on.
  ScenarioSpec d = base_spec("D");
  d.arms = {make_arm("HOL-SEC=OFF", Discipline::HOL, SecurityMode::Off, 4, 4.0),
            make_arm("HOL-SEC=ON", Discipline::HOL, SecurityMode::On, 4, 4.0)};
  all.push_back(std::move(d));

  return all;
}

bool is_builtin_scenario(const std::string& name) {
  return name == "A" || name == "B" || name == "C" || name == "D";
}

ScenarioSpec builtin_scenario(const std::string& name) {
  for (auto& spec : builtin_scenarios())
    if (spec.name == name) return spec;
  throw std::invalid_argument("unknown builtin scenario: " + name);
}

RouterConfig make_router_config(const ScenarioSpec& spec, const ArmSpec& arm) {
  RouterConfig cfg;
  cfg.security = arm.security;
  cfg.accept_prob = spec.accept_prob;
  cfg.forwarding.servers = arm.servers;
  cfg.forwarding.capacity = spec.capacity;
  cfg.forwarding.discipline = arm.discipline;
  cfg.forwarding.service = GEParams{spec.mu, spec.scv_s};
  cfg.acl.servers = arm.servers;
  cfg.acl.capacity = spec.capacity;
  cfg.acl.discipline = arm.discipline;
  cfg.acl.service = GEParams{spec.acl_rate_factor * spec.mu, spec.acl_scv};
  return cfg;
}

std::vector<ArrivalStream> make_streams(const ScenarioSpec& spec,
                                        const ArmSpec& arm, double lambda1) {
  return {ArrivalStream{0, GEParams{lambda1, arm.scv_a1}},
          ArrivalStream{1, GEParams{spec.lambda2, arm.scv_a2}}};
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t arm,
                               std::size_t sweep, std::size_t rep) {
  return derive_seed(derive_seed(derive_seed(base_seed, arm), sweep), rep);
}

namespace {

// Per-replication metric values, before aggregation.
struct RepValues {
  double w[3], mql[3], pl[3], util[3];
  double little = 0.0;
  bool ok = false;
  std::string error;
};

RepValues measure(const ScenarioSpec& spec, const ArmSpec& arm, double lambda1,
                  std::uint64_t seed) {
  RepValues v{};
  const RouterConfig cfg = make_router_config(spec, arm);
  const auto streams = make_streams(spec, arm, lambda1);
  const ReplicationResult r =
      run_replication(cfg, streams, seed, spec.arrivals_per_replication,
                      spec.warmup_fraction);

  const NodeMetrics& fwd = r.forwarding;
  std::uint64_t offered[3] = {0, 0, 0};
  std::uint64_t lost[3] = {0, 0, 0};
  const NodeMetrics& entry = r.acl ? *r.acl : fwd;
  for (int k = 0; k < 2; ++k) {
    offered[k] = entry.per_class[k].offered;
    lost[k] = fwd.per_class[k].lost + (r.acl ? r.acl->per_class[k].lost : 0);
    offered[2] += offered[k];
    lost[2] += lost[k];

    v.w[k] = r.e2e_w(k);
    v.mql[k] = fwd.per_class[k].l + (r.acl ? r.acl->per_class[k].l : 0.0);
    v.util[k] = fwd.per_class[k].util_share;
  }
  v.w[2] = r.e2e_w_total();
  v.mql[2] = v.mql[0] + v.mql[1];
  v.util[2] = fwd.utilization;
  for (int k = 0; k < 3; ++k)
    v.pl[k] = offered[k] > 0 ? static_cast<double>(lost[k]) /
                                   static_cast<double>(offered[k])
                             : 0.0;

  v.little = littles_check(fwd);
  if (r.acl) v.little = std::max(v.little, littles_check(*r.acl));
  v.ok = true;
  return v;
}

}  // namespace

MetricsReport run_scenario(const ScenarioSpec& spec, std::uint64_t base_seed,
                           int parallelism) {
  spec.validate();
  if (parallelism < 1)
    throw std::invalid_argument("run_scenario: parallelism must be >= 1");

  MetricsReport report;
  report.scenario = spec.name;
  report.sweep = spec.lambda1_sweep;
  report.replications = spec.replications;
  report.base_seed = base_seed;

  const std::size_t n_arms = spec.arms.size();
  const std::size_t n_sweep = spec.lambda1_sweep.size();
  const std::size_t n_reps = static_cast<std::size_t>(spec.replications);
  const std::size_t n_jobs = n_arms * n_sweep * n_reps;

  std::vector<RepValues> results(n_jobs);
  std::atomic<std::size_t> next_job{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next_job.fetch_add(1);
      if (job >= n_jobs) return;
      const std::size_t a = job / (n_sweep * n_reps);
      const std::size_t s = (job / n_reps) % n_sweep;
      const std::size_t rep = job % n_reps;
      try {
        results[job] = measure(spec, spec.arms[a], spec.lambda1_sweep[s],
                               replication_seed(base_seed, a, s, rep));
      } catch (const std::exception& e) {
        results[job].ok = false;
        results[job].error = e.what();
      }
    }
  };

  const int threads =
      static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(parallelism), n_jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate in fixed (arm, sweep, replication) order so the report is
  // independent of scheduling.
  for (std::size_t a = 0; a < n_arms; ++a) {
    ArmResult arm_result;
    arm_result.arm = spec.arms[a];
    for (std::size_t s = 0; s < n_sweep && !arm_result.failed; ++s) {
      PointMetrics pm;
      std::vector<double> w[3], mql[3], pl[3], util[3];
      for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const RepValues& v = results[(a * n_sweep + s) * n_reps + rep];
        if (!v.ok) {
          arm_result.failed = true;
          arm_result.error = v.error;
          break;
        }
        for (int k = 0; k < 3; ++k) {
          w[k].push_back(v.w[k]);
          mql[k].push_back(v.mql[k]);
          pl[k].push_back(v.pl[k]);
          util[k].push_back(v.util[k]);
        }
        arm_result.max_little_residual =
            std::max(arm_result.max_little_residual, v.little);
      }
      if (arm_result.failed) break;
      for (int k = 0; k < 3; ++k) {
        pm.w[k] = summarize(w[k]);
        pm.mql[k] = summarize(mql[k]);
        pm.pl[k] = summarize(pl[k]);
        pm.util[k] = summarize(util[k]);
      }
      arm_result.points.push_back(pm);
    }
    if (arm_result.failed) arm_result.points.clear();
    report.arms.push_back(std::move(arm_result));
  }
  return report;
}

}  // namespace routerq
