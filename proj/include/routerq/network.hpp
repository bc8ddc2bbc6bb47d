#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "routerq/node.hpp"

namespace routerq {

enum class SecurityMode { Off, On };
enum class ForwardingFullPolicy { Drop };

struct ArrivalStream {
  int klass = 0;
  GEParams interarrival{};
};

// Tandem topology: optional ACL security node in front of the forwarding
// node. A packet completing ACL service is forwarded with probability
// `accept_prob`, otherwise rejected (counted separately from buffer loss).
struct RouterConfig {
  SecurityMode security = SecurityMode::Off;
  NodeConfig acl{};  // used only when security is On
  NodeConfig forwarding{};
  double accept_prob = 1.0;  // p
  ForwardingFullPolicy full_forwarding_policy = ForwardingFullPolicy::Drop;

  void validate() const;
};

// Bernoulli(p) post-ACL acceptance; exact at p = 0 and p = 1.
bool acl_accepts(double accept_prob, Rng& rng);

struct ReplicationResult {
  std::optional<NodeMetrics> acl;
  NodeMetrics forwarding;

  // End-to-end response, measured from network arrival to final departure,
  // over the post-warm-up window.
  std::vector<double> e2e_resp_sum;         // per class
  std::vector<std::uint64_t> e2e_resp_count;  // per class

  // Whole-run conservation ledger (exact integers, never windowed).
  std::vector<std::uint64_t> offered;   // packets created, per class
  std::vector<std::uint64_t> departed;  // left the network, per class
  std::vector<std::uint64_t> acl_lost;  // ACL buffer full
  std::vector<std::uint64_t> fwd_lost;  // forwarding buffer full
  std::vector<std::uint64_t> rejected;  // security rejections (1 - p)
  std::uint64_t in_flight_end = 0;

  std::uint64_t arrivals_dispatched = 0;
  std::uint64_t preemptions = 0;
  double end_time = 0.0;
  double window_start = 0.0;

  double e2e_w(int k) const {
    return e2e_resp_count[k] > 0
               ? e2e_resp_sum[k] / static_cast<double>(e2e_resp_count[k])
               : 0.0;
  }
  double e2e_w_total() const;

  // offered == departed + acl_lost + fwd_lost + rejected + in-flight,
  // per class and in total, as exact integers.
  bool conservation_ok() const;
};

// Runs one replication to `arrivals_limit` external arrivals, discarding the
// first `warmup_fraction` of them from all measurement accumulators.
// Security Off feeds the streams straight into the forwarding node.
ReplicationResult run_replication(const RouterConfig& config,
                                  const std::vector<ArrivalStream>& streams,
                                  std::uint64_t seed,
                                  std::uint64_t arrivals_limit,
                                  double warmup_fraction,
                                  NodeObserver* forwarding_observer = nullptr,
                                  NodeObserver* acl_observer = nullptr);

}  // namespace routerq
