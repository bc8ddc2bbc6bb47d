#include <cmath>
#include <vector>

#include <doctest.h>

#include "routerq/markov.hpp"
#include "routerq/network.hpp"
#include "routerq/stats.hpp"

using namespace routerq;

namespace {

RouterConfig off_config(Discipline d, int servers, double mu, double scv_s) {
  RouterConfig cfg;
  cfg.forwarding.servers = servers;
  cfg.forwarding.capacity = 50;
  cfg.forwarding.discipline = d;
  cfg.forwarding.service = GEParams{mu, scv_s};
  return cfg;
}

RouterConfig on_config(Discipline d, int servers, double mu, double scv_s,
                       double acl_rate, double p) {
  RouterConfig cfg = off_config(d, servers, mu, scv_s);
  cfg.security = SecurityMode::On;
  cfg.accept_prob = p;
  cfg.acl = cfg.forwarding;
  cfg.acl.service = GEParams{acl_rate, 4.0};
  return cfg;
}

std::vector<ArrivalStream> two_streams(double lambda1, double lambda2,
                                       double scv) {
  return {ArrivalStream{0, GEParams{lambda1, scv}},
          ArrivalStream{1, GEParams{lambda2, scv}}};
}

}  // namespace

TEST_CASE("no arrival streams yield all-zero metrics") {
  const auto r = run_replication(off_config(Discipline::FCFS, 1, 2.0, 1.0), {},
                                 1, 1000, 0.0);
  CHECK(r.end_time == 0.0);
  CHECK(r.forwarding.total.l == 0.0);
  CHECK(r.forwarding.utilization == 0.0);
  CHECK(r.e2e_w_total() == 0.0);
  CHECK(r.in_flight_end == 0);
  CHECK(r.conservation_ok());
}

TEST_CASE("post-ACL acceptance is exact at the endpoints") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    CHECK(acl_accepts(1.0, rng));
    CHECK_FALSE(acl_accepts(0.0, rng));
  }
}

TEST_CASE("post-ACL acceptance matches the binomial rate") {
  Rng rng(99);
  const int n = 1000000;
  int accepted = 0;
  for (int i = 0; i < n; ++i)
    if (acl_accepts(0.9, rng)) ++accepted;
  CHECK(std::abs(static_cast<double>(accepted) / n - 0.9) < 0.001);
}

TEST_CASE("M/M/1 sanity: W near 1/(mu - lambda) at rho = 0.5") {
  // N = 50 approximates the infinite queue at this load.
  RouterConfig cfg = off_config(Discipline::FCFS, 1, 2.0, 1.0);
  const std::vector<ArrivalStream> streams = {
      ArrivalStream{0, GEParams{1.0, 1.0}}};
  std::vector<double> w;
  for (std::uint64_t rep = 0; rep < 6; ++rep)
    w.push_back(run_replication(cfg, streams, derive_seed(777, rep), 200000,
                                0.1)
                    .forwarding.total.w);
  const auto ci = summarize(w);
  CHECK(ci.lo <= 1.0);
  CHECK(1.0 <= ci.hi);
}

TEST_CASE("simulation matches the M/M/c/N closed form at SCV = 1") {
  const double mu = 17e5;
  for (int c : {1, 4}) {
    const double lambda = 0.85 * c * mu;
    RouterConfig cfg = off_config(Discipline::FCFS, c, mu, 1.0);
    const std::vector<ArrivalStream> streams = {
        ArrivalStream{0, GEParams{lambda, 1.0}}};
    const auto oracle = mmcn_solve(lambda, mu, c, 50);
    std::vector<double> l, pl;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
      const auto r = run_replication(cfg, streams, derive_seed(4000 + c, rep),
                                     200000, 0.1);
      l.push_back(r.forwarding.total.l);
      pl.push_back(r.forwarding.total.pl);
      CHECK(littles_check(r.forwarding) < 0.01);
    }
    const auto l_ci = summarize(l);
    const auto pl_ci = summarize(pl);
    CHECK(l_ci.lo <= oracle.mean_in_system);
    CHECK(oracle.mean_in_system <= l_ci.hi);
    CHECK(pl_ci.lo <= oracle.blocking);
    CHECK(oracle.blocking <= pl_ci.hi);
  }
}

TEST_CASE("security on with p=1 and a very fast ACL looks like security off") {
  const double mu = 17e5;
  std::vector<double> w_on, w_off;
  for (std::uint64_t rep = 0; rep < 8; ++rep) {
    const auto streams = two_streams(8e5, 5e5, 4.0);
    const auto off = run_replication(off_config(Discipline::HOL, 4, mu, 4.0),
                                     streams, derive_seed(31, rep), 150000, 0.1);
    const auto on = run_replication(
        on_config(Discipline::HOL, 4, mu, 4.0, 1e12, 1.0), streams,
        derive_seed(31, rep), 150000, 0.1);
    w_off.push_back(off.forwarding.total.w);
    w_on.push_back(on.forwarding.total.w);
  }
  // Forwarding-node metrics statistically indistinguishable: overlapping CIs.
  CHECK(summarize(w_on).overlaps(summarize(w_off)));
}

TEST_CASE("security off never touches the ACL accumulators") {
  const auto r = run_replication(off_config(Discipline::HOL, 4, 17e5, 4.0),
                                 two_streams(8e5, 5e5, 4.0), 5, 20000, 0.1);
  CHECK(!r.acl.has_value());
  for (int k = 0; k < 2; ++k) CHECK(r.acl_lost[k] == 0);
}

TEST_CASE("tandem conservation holds exactly across configurations") {
  for (double p : {1.0, 0.9, 0.5, 0.0}) {
    const auto r = run_replication(
        on_config(Discipline::HOL, 2, 17e5, 4.0, 2 * 17e5, p),
        two_streams(9e5, 5e5, 4.0), 17, 40000, 0.1);
    CHECK(r.conservation_ok());
    std::uint64_t offered = 0, accounted = 0;
    for (int k = 0; k < 2; ++k) {
      offered += r.offered[k];
      accounted +=
          r.departed[k] + r.acl_lost[k] + r.fwd_lost[k] + r.rejected[k];
    }
    CHECK(offered == 40000);
    CHECK(offered == accounted + r.in_flight_end);
    if (p == 0.0) {
      CHECK(r.departed[0] + r.departed[1] == 0);
      CHECK(r.rejected[0] + r.rejected[1] > 0);
    }
    if (p == 1.0) CHECK(r.rejected[0] + r.rejected[1] == 0);
  }
}

TEST_CASE("rejection fraction follows the acceptance probability") {
  const auto r = run_replication(
      on_config(Discipline::FCFS, 4, 17e5, 1.0, 4 * 17e5, 0.7),
      two_streams(6e5, 5e5, 1.0), 23, 200000, 0.0);
  const double rejected = static_cast<double>(r.rejected[0] + r.rejected[1]);
  std::uint64_t acl_departures = 0;
  for (int k = 0; k < 2; ++k)
    acl_departures += r.offered[k] - r.acl_lost[k];
  // Approximate: a few packets are still inside the ACL at the end.
  const double frac = rejected / static_cast<double>(acl_departures);
  CHECK(std::abs(frac - 0.3) < 0.01);
}

TEST_CASE("end-to-end response includes the ACL stage") {
  const auto streams = two_streams(6e5, 5e5, 4.0);
  const auto on = run_replication(
      on_config(Discipline::HOL, 4, 17e5, 4.0, 2 * 17e5, 1.0), streams, 3,
      100000, 0.1);
  // e2e W must exceed the forwarding node's own W by at least the ACL
  // service time scale.
  CHECK(on.e2e_w_total() > on.forwarding.total.w);
  REQUIRE(on.acl.has_value());
  CHECK(on.e2e_w_total() >
        on.forwarding.total.w + 0.5 * on.acl->total.w);
}

TEST_CASE("replications with the same seed are bit-identical") {
  const auto streams = two_streams(9e5, 5e5, 4.0);
  const RouterConfig cfg = off_config(Discipline::HOL, 4, 17e5, 4.0);
  const auto a = run_replication(cfg, streams, 123, 60000, 0.1);
  const auto b = run_replication(cfg, streams, 123, 60000, 0.1);
  CHECK(a.end_time == b.end_time);
  CHECK(a.forwarding.total.l == b.forwarding.total.l);
  CHECK(a.forwarding.total.w == b.forwarding.total.w);
  CHECK(a.forwarding.utilization == b.forwarding.utilization);
  CHECK(a.e2e_w_total() == b.e2e_w_total());
  const auto c = run_replication(cfg, streams, 124, 60000, 0.1);
  CHECK(a.forwarding.total.w != c.forwarding.total.w);
}

TEST_CASE("warm-up discards the initial transient") {
  const auto streams = two_streams(9e5, 5e5, 4.0);
  const RouterConfig cfg = off_config(Discipline::HOL, 4, 17e5, 4.0);
  const auto r = run_replication(cfg, streams, 9, 50000, 0.2);
  CHECK(r.window_start > 0.0);
  CHECK(r.forwarding.window == doctest::Approx(r.end_time - r.window_start));
  // Roughly 20% of arrivals fall before the window.
  const auto full = run_replication(cfg, streams, 9, 50000, 0.0);
  CHECK(full.window_start == 0.0);
  CHECK(full.forwarding.total.offered > r.forwarding.total.offered);
}

TEST_CASE("invalid run parameters are rejected") {
  const RouterConfig cfg = off_config(Discipline::FCFS, 1, 2.0, 1.0);
  CHECK_THROWS_AS(run_replication(cfg, {}, 1, 100, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(run_replication(cfg, {ArrivalStream{5, GEParams{1.0, 1.0}}},
                                  1, 100, 0.1),
                  std::invalid_argument);
  RouterConfig bad = cfg;
  bad.accept_prob = 1.5;
  CHECK_THROWS_AS(run_replication(bad, {}, 1, 100, 0.1),
                  std::invalid_argument);
}
