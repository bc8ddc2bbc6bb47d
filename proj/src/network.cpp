#include "routerq/network.hpp"

#include <cmath>
#include <stdexcept>

namespace routerq {

namespace {
constexpr std::uint16_t kAclNode = 0;
constexpr std::uint16_t kForwardingNode = 1;
}  // namespace

void RouterConfig::validate() const {
  if (!(accept_prob >= 0.0 && accept_prob <= 1.0))
    throw std::invalid_argument("RouterConfig: accept_prob must be in [0,1]");
  forwarding.validate();
  if (security == SecurityMode::On) {
    acl.validate();
    if (acl.num_classes != forwarding.num_classes)
      throw std::invalid_argument(
          "RouterConfig: node class counts must match");
  }
}

bool acl_accepts(double accept_prob, Rng& rng) {
  return rng.uniform() <= accept_prob;
}

double ReplicationResult::e2e_w_total() const {
  double sum = 0.0;
  std::uint64_t count = 0;
  for (std::size_t k = 0; k < e2e_resp_sum.size(); ++k) {
    sum += e2e_resp_sum[k];
    count += e2e_resp_count[k];
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

bool ReplicationResult::conservation_ok() const {
  std::uint64_t in_flight = 0;
  for (std::size_t k = 0; k < offered.size(); ++k) {
    const std::uint64_t accounted =
        departed[k] + acl_lost[k] + fwd_lost[k] + rejected[k];
    if (accounted > offered[k]) return false;
    in_flight += offered[k] - accounted;
  }
  return in_flight == in_flight_end;
}

ReplicationResult run_replication(const RouterConfig& config,
                                  const std::vector<ArrivalStream>& streams,
                                  std::uint64_t seed,
                                  std::uint64_t arrivals_limit,
                                  double warmup_fraction,
                                  NodeObserver* forwarding_observer,
                                  NodeObserver* acl_observer) {
  config.validate();
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw std::invalid_argument(
        "run_replication: warmup_fraction must be in [0,1)");
  const int nc = config.forwarding.num_classes;
  for (const auto& st : streams) {
    st.interarrival.validate();
    if (st.klass < 0 || st.klass >= nc)
      throw std::invalid_argument("run_replication: stream class out of range");
  }

  const bool security_on = config.security == SecurityMode::On;
  Engine eng;
  Rng rng(seed);
  PacketPool pool;
  QueueNode acl(kAclNode, security_on ? config.acl : config.forwarding);
  QueueNode fwd(kForwardingNode, config.forwarding);
  acl.set_observer(acl_observer);
  fwd.set_observer(forwarding_observer);

  std::vector<GESampler> interarrival;
  interarrival.reserve(streams.size());
  for (const auto& st : streams) interarrival.emplace_back(st.interarrival);

  ReplicationResult res;
  res.e2e_resp_sum.assign(nc, 0.0);
  res.e2e_resp_count.assign(nc, 0);
  res.offered.assign(nc, 0);
  res.departed.assign(nc, 0);
  res.acl_lost.assign(nc, 0);
  res.fwd_lost.assign(nc, 0);
  res.rejected.assign(nc, 0);

  std::uint64_t warmup_arrivals = static_cast<std::uint64_t>(
      std::llround(warmup_fraction * static_cast<double>(arrivals_limit)));
  if (arrivals_limit > 0 && warmup_arrivals >= arrivals_limit)
    warmup_arrivals = arrivals_limit - 1;

  for (std::uint32_t s = 0; s < streams.size(); ++s)
    eng.schedule_arrival(interarrival[s](rng), s);

  auto handler = [&](const Event& ev) {
    const double now = ev.time;
    switch (ev.kind) {
      case EventKind::ExternalArrival: {
        const auto& st = streams[ev.stream];
        // Exactly one successor per arrival keeps zero-delay chains finite.
        eng.schedule_arrival(now + interarrival[ev.stream](rng), ev.stream);
        const std::uint32_t pkt = pool.create();
        Packet& p = pool[pkt];
        p.klass = st.klass;
        p.network_arrival_time = now;
        ++res.offered[st.klass];
        QueueNode& entry = security_on ? acl : fwd;
        if (entry.on_arrival(eng, rng, pool, pkt, now) ==
            ArrivalOutcome::Lost) {
          ++(security_on ? res.acl_lost : res.fwd_lost)[st.klass];
          pool.release(pkt);
        }
        if (warmup_arrivals > 0 &&
            eng.arrivals_dispatched() == warmup_arrivals) {
          if (security_on) acl.reset_window(now);
          fwd.reset_window(now);
          res.e2e_resp_sum.assign(nc, 0.0);
          res.e2e_resp_count.assign(nc, 0);
          res.window_start = now;
        }
        break;
      }
      case EventKind::ServiceCompletion: {
        if (ev.node == kAclNode) {
          if (auto departed = acl.on_service_completion(
                  eng, rng, pool, ev.server, ev.epoch, now)) {
            const int k = pool[*departed].klass;
            if (acl_accepts(config.accept_prob, rng)) {
              // Fresh node visit: the forwarding stage draws its own demand.
              pool[*departed].service_demand = -1.0;
              pool[*departed].remaining_service = 0.0;
              if (fwd.on_arrival(eng, rng, pool, *departed, now) ==
                  ArrivalOutcome::Lost) {
                ++res.fwd_lost[k];
                pool.release(*departed);
              }
            } else {
              ++res.rejected[k];
              pool.release(*departed);
            }
          }
        } else {
          if (auto departed = fwd.on_service_completion(
                  eng, rng, pool, ev.server, ev.epoch, now)) {
            const Packet& p = pool[*departed];
            res.e2e_resp_sum[p.klass] += now - p.network_arrival_time;
            ++res.e2e_resp_count[p.klass];
            ++res.departed[p.klass];
            pool.release(*departed);
          }
        }
        break;
      }
    }
  };

  eng.run(handler, StopRule::arrivals(arrivals_limit));

  res.arrivals_dispatched = eng.arrivals_dispatched();
  res.end_time = eng.clock();
  res.in_flight_end = pool.live();
  res.preemptions =
      fwd.preemption_count() + (security_on ? acl.preemption_count() : 0);
  if (security_on) res.acl = acl.snapshot_metrics(res.end_time);
  res.forwarding = fwd.snapshot_metrics(res.end_time);
  if (!fwd.conservation_ok() || (security_on && !acl.conservation_ok()) ||
      !res.conservation_ok())
    throw std::logic_error("run_replication: conservation violated");
  return res;
}

}  // namespace routerq
