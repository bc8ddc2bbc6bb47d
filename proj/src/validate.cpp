#include "routerq/validate.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "routerq/ge.hpp"
#include "routerq/markov.hpp"
#include "routerq/network.hpp"
#include "routerq/stats.hpp"

namespace routerq {

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

bool run_validation_suite(std::ostream& out) {
  std::vector<Check> checks;

  checks.push_back({"ge_tau fixed points", [](std::string&) {
    return ge_tau({1.0, 1.0}) == 1.0 && ge_tau({17e5, 4.0}) == 0.4 &&
           close(ge_tau({5e5, 10.0}), 2.0 / 11.0, 1e-15);
  }});

  checks.push_back({"GE sampler moments (2e6 draws)", [](std::string& detail) {
    const GEParams params{17e5, 4.0};
    Rng rng(0x9a3c1ull);
    const GESampler sampler(params);
    const std::size_t n = 2000000;
    double sum = 0.0, sq = 0.0;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sampler(rng);
      sum += x;
      sq += x * x;
      if (x == 0.0) ++zeros;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double scv = var / (mean * mean);
    const double zero_frac = static_cast<double>(zeros) / n;
    detail = "mean=" + std::to_string(mean) + " scv=" + std::to_string(scv) +
             " zeros=" + std::to_string(zero_frac);
    return close(mean, 1.0 / 17e5, 0.01) && close(scv, 4.0, 0.03) &&
           std::abs(zero_frac - 0.6) < 0.01;
  }});

  checks.push_back({"M/M/1/N closed form", [](std::string&) {
    const auto r = mm1n_solve(1.0, 2.0, 2);
    return close(r.probabilities[0], 4.0 / 7.0, 1e-12) &&
           close(r.blocking, 1.0 / 7.0, 1e-12) &&
           close(r.mean_in_system, 4.0 / 7.0, 1e-12);
  }});

  checks.push_back({"M/M/1/N continuity near rho=1", [](std::string&) {
    const auto lo = mm1n_solve(1.0 - 1e-9, 1.0, 50);
    const auto at = mm1n_solve(1.0, 1.0, 50);
    const auto hi = mm1n_solve(1.0 + 1e-9, 1.0, 50);
    return close(lo.mean_in_system, at.mean_in_system, 1e-6) &&
           close(hi.mean_in_system, at.mean_in_system, 1e-6) &&
           close(lo.blocking, at.blocking, 1e-6) &&
           close(hi.blocking, at.blocking, 1e-6);
  }});

  checks.push_back({"M/M/c/N reduces to M/M/1/N at c=1", [](std::string&) {
    for (double rho : {0.3, 0.85, 0.95, 1.2}) {
      const auto a = mmcn_solve(rho * 17e5, 17e5, 1, 50);
      const auto b = mm1n_solve(rho * 17e5, 17e5, 50);
      if (!close(a.mean_in_system, b.mean_in_system, 1e-11)) return false;
      if (std::abs(a.blocking - b.blocking) > 1e-11 * std::max(1.0, b.blocking))
        return false;
    }
    return true;
  }});

  checks.push_back({"M/M/c/c blocking equals Erlang-B", [](std::string&) {
    for (int c : {1, 4, 16}) {
      const double a = 0.8 * c;
      const auto r = mmcn_solve(a * 1.0, 1.0, c, c);
      if (!close(r.blocking, erlang_b(c, a), 1e-10)) return false;
    }
    return true;
  }});

  checks.push_back(
      {"simulation matches M/M/1/N (rho=0.85)", [](std::string& detail) {
        RouterConfig cfg;
        cfg.forwarding.servers = 1;
        cfg.forwarding.capacity = 50;
        cfg.forwarding.discipline = Discipline::FCFS;
        cfg.forwarding.service = GEParams{17e5, 1.0};
        const double lambda = 0.85 * 17e5;
        const std::vector<ArrivalStream> streams = {
            ArrivalStream{0, GEParams{lambda, 1.0}}};
        const auto oracle = mm1n_solve(lambda, 17e5, 50);
        std::vector<double> l_values, pl_values;
        double max_little = 0.0;
        for (std::uint64_t rep = 0; rep < 8; ++rep) {
          const auto r = run_replication(cfg, streams,
                                         derive_seed(0x5151, rep), 300000, 0.1);
          l_values.push_back(r.forwarding.total.l);
          pl_values.push_back(r.forwarding.total.pl);
          max_little = std::max(max_little, littles_check(r.forwarding));
        }
        const MetricCell l_ci = summarize(l_values);
        const MetricCell pl_ci = summarize(pl_values);
        detail = "L in [" + std::to_string(l_ci.lo) + "," +
                 std::to_string(l_ci.hi) + "] oracle " +
                 std::to_string(oracle.mean_in_system) +
                 "; little=" + std::to_string(max_little);
        return l_ci.lo <= oracle.mean_in_system &&
               oracle.mean_in_system <= l_ci.hi &&
               pl_ci.lo <= oracle.blocking && oracle.blocking <= pl_ci.hi &&
               max_little < 0.01;
      }});

  checks.push_back({"replication determinism", [](std::string&) {
    RouterConfig cfg;
    cfg.forwarding.servers = 4;
    cfg.forwarding.capacity = 50;
    cfg.forwarding.discipline = Discipline::HOL;
    cfg.forwarding.service = GEParams{17e5, 4.0};
    const std::vector<ArrivalStream> streams = {
        ArrivalStream{0, GEParams{10e5, 4.0}},
        ArrivalStream{1, GEParams{5e5, 4.0}}};
    const auto a = run_replication(cfg, streams, 42, 50000, 0.1);
    const auto b = run_replication(cfg, streams, 42, 50000, 0.1);
    return a.forwarding.total.l == b.forwarding.total.l &&
           a.forwarding.total.w == b.forwarding.total.w &&
           a.end_time == b.end_time;
  }});

  bool all_ok = true;
  for (auto& check : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = check.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "PASS" : "FAIL") << "  " << check.name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok;
}

}  // namespace routerq
