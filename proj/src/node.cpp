#include "routerq/node.hpp"

#include <stdexcept>

namespace routerq {

void NodeConfig::validate() const {
  if (servers < 1)
    throw std::invalid_argument("NodeConfig: servers must be >= 1");
  if (capacity < 1)
    throw std::invalid_argument("NodeConfig: capacity must be >= 1");
  if (servers > capacity)
    throw std::invalid_argument("NodeConfig: servers must not exceed capacity");
  if (num_classes < 1)
    throw std::invalid_argument("NodeConfig: num_classes must be >= 1");
  service.validate();
}

QueueNode::QueueNode(std::uint16_t node_id, NodeConfig cfg)
    : node_id_(node_id), cfg_(cfg), service_sampler_(cfg.service) {
  cfg_.validate();
  const int nc = cfg_.num_classes;
  servers_.resize(static_cast<std::size_t>(cfg_.servers));
  busy_class_.assign(nc, 0);
  class_queues_.resize(static_cast<std::size_t>(nc));
  in_class_.assign(nc, 0);
  area_.assign(nc, 0.0);
  busy_area_.assign(nc, 0.0);
  resp_sum_.assign(nc, 0.0);
  resp_count_.assign(nc, 0);
  offered_w_.assign(nc, 0);
  admitted_w_.assign(nc, 0);
  lost_w_.assign(nc, 0);
  offered_total_.assign(nc, 0);
  admitted_total_.assign(nc, 0);
  lost_total_.assign(nc, 0);
  departed_total_.assign(nc, 0);
}

void QueueNode::update_to(double now) {
  const double dt = now - last_update_;
  if (dt > 0.0) {
    for (int k = 0; k < cfg_.num_classes; ++k) {
      area_[k] += in_class_[k] * dt;
      busy_area_[k] += busy_class_[k] * dt;
    }
  }
  last_update_ = now;
}

int QueueNode::find_idle_server() const {
  if (busy_ == cfg_.servers) return -1;
  for (int s = 0; s < cfg_.servers; ++s)
    if (servers_[s].pkt == kNoPacket) return s;
  return -1;
}

int QueueNode::find_preemptable(const PacketPool& pool,
                                int arriving_class) const {
  // Victim: strictly lower priority than the arrival (largest class index),
  // ties broken by latest service start.
  int victim = -1;
  int victim_class = arriving_class;
  double victim_started = 0.0;
  for (int s = 0; s < cfg_.servers; ++s) {
    const Packet& p = pool[servers_[s].pkt];
    if (p.klass > victim_class ||
        (p.klass == victim_class && victim >= 0 &&
         p.service_started > victim_started)) {
      victim = s;
      victim_class = p.klass;
      victim_started = p.service_started;
    }
  }
  return victim;
}

void QueueNode::start_service(Engine& eng, Rng& rng, PacketPool& pool,
                              int server, std::uint32_t pkt, double now) {
  Server& s = servers_[static_cast<std::size_t>(server)];
  if (s.pkt != kNoPacket)
    throw std::logic_error("QueueNode: service start on a busy server");
  Packet& p = pool[pkt];
  if (p.service_demand < 0.0) {  // first start: draw the demand
    p.service_demand = service_sampler_(rng);
    p.remaining_service = p.service_demand;
  }
  p.service_started = now;
  p.in_service = true;
  s.pkt = pkt;
  ++s.epoch;  // invalidates any pending completion for this server
  ++busy_;
  ++busy_class_[p.klass];
  if (observer_) observer_->on_service_start(p, now);
  eng.schedule_completion(now + p.remaining_service, node_id_,
                          static_cast<std::uint16_t>(server), s.epoch);
}

ArrivalOutcome QueueNode::on_arrival(Engine& eng, Rng& rng, PacketPool& pool,
                                     std::uint32_t pkt, double now) {
  update_to(now);
  Packet& p = pool[pkt];
  const int k = p.klass;
  if (k < 0 || k >= cfg_.num_classes)
    throw std::invalid_argument("QueueNode: packet class out of range");
  ++offered_total_[k];
  ++offered_w_[k];
  if (in_system_ == cfg_.capacity) {
    ++lost_total_[k];
    ++lost_w_[k];
    return ArrivalOutcome::Lost;
  }
  p.node_arrival_time = now;
  ++admitted_total_[k];
  ++admitted_w_[k];
  ++in_system_;
  ++in_class_[k];
  if (observer_) observer_->on_admit(p, now);

  const int idle = find_idle_server();
  if (idle >= 0) {
    start_service(eng, rng, pool, idle, pkt, now);
    return ArrivalOutcome::Admitted;
  }
  if (cfg_.discipline == Discipline::HOL) {
    const int victim = find_preemptable(pool, k);
    if (victim >= 0) {
      preempt(eng, rng, pool, victim, pkt, now);
      return ArrivalOutcome::Admitted;
    }
    class_queues_[k].push_back(pkt);
  } else {
    fifo_.push_back(pkt);
  }
  return ArrivalOutcome::Admitted;
}

void QueueNode::preempt(Engine& eng, Rng& rng, PacketPool& pool,
                        int victim_server, std::uint32_t incoming, double now) {
  if (cfg_.discipline != Discipline::HOL)
    throw std::logic_error("QueueNode: preemption under FCFS");
  Server& s = servers_[static_cast<std::size_t>(victim_server)];
  if (s.pkt == kNoPacket)
    throw std::logic_error("QueueNode: preemption of an idle server");
  Packet& victim = pool[s.pkt];
  const double elapsed = now - victim.service_started;
  victim.remaining_service -= elapsed;
  if (victim.remaining_service < 0.0) {
    if (victim.remaining_service < -1e-9)
      throw std::logic_error("QueueNode: negative remaining service");
    victim.remaining_service = 0.0;
  }
  victim.in_service = false;
  --busy_;
  --busy_class_[victim.klass];
  ++preemptions_;
  if (observer_) observer_->on_preempt(victim, now);
  class_queues_[victim.klass].push_front(s.pkt);  // preemptive-resume
  s.pkt = kNoPacket;
  start_service(eng, rng, pool, victim_server, incoming, now);
}

std::optional<std::uint32_t> QueueNode::select_next() {
  if (cfg_.discipline == Discipline::FCFS) {
    if (fifo_.empty()) return std::nullopt;
    const std::uint32_t idx = fifo_.front();
    fifo_.pop_front();
    return idx;
  }
  for (auto& q : class_queues_) {
    if (!q.empty()) {
      const std::uint32_t idx = q.front();
      q.pop_front();
      return idx;
    }
  }
  return std::nullopt;
}

std::optional<std::uint32_t> QueueNode::on_service_completion(
    Engine& eng, Rng& rng, PacketPool& pool, std::uint16_t server,
    std::uint64_t epoch, double now) {
  Server& s = servers_[server];
  if (s.pkt == kNoPacket || s.epoch != epoch) return std::nullopt;  // stale
  update_to(now);
  const std::uint32_t idx = s.pkt;
  Packet& p = pool[idx];
  p.remaining_service = 0.0;
  p.in_service = false;
  s.pkt = kNoPacket;
  --busy_;
  --busy_class_[p.klass];
  --in_system_;
  --in_class_[p.klass];
  ++departed_total_[p.klass];
  resp_sum_[p.klass] += now - p.node_arrival_time;
  ++resp_count_[p.klass];
  if (observer_) observer_->on_depart(p, now);
  if (auto next = select_next())
    start_service(eng, rng, pool, server, *next, now);
  return idx;
}

void QueueNode::reset_window(double now) {
  update_to(now);
  window_start_ = now;
  last_update_ = now;
  const int nc = cfg_.num_classes;
  area_.assign(nc, 0.0);
  busy_area_.assign(nc, 0.0);
  resp_sum_.assign(nc, 0.0);
  resp_count_.assign(nc, 0);
  offered_w_.assign(nc, 0);
  admitted_w_.assign(nc, 0);
  lost_w_.assign(nc, 0);
}

NodeMetrics QueueNode::snapshot_metrics(double now) const {
  if (now < window_start_)
    throw std::invalid_argument(
        "QueueNode::snapshot_metrics: time precedes window start");
  const int nc = cfg_.num_classes;
  const double window = now - window_start_;
  NodeMetrics m;
  m.per_class.resize(static_cast<std::size_t>(nc));
  m.window = window;

  bool any_activity = false;
  for (int k = 0; k < nc; ++k)
    if (offered_w_[k] > 0 || resp_count_[k] > 0 || area_[k] > 0.0)
      any_activity = true;
  if (window <= 0.0) {
    if (any_activity)
      throw std::invalid_argument(
          "QueueNode::snapshot_metrics: empty measurement window");
    return m;  // idle node, zero-length window: all metrics zero
  }

  const double tail = now - last_update_;
  double busy_total = 0.0;
  for (int k = 0; k < nc; ++k) {
    ClassNodeMetrics& c = m.per_class[k];
    c.offered = offered_w_[k];
    c.admitted = admitted_w_[k];
    c.lost = lost_w_[k];
    c.resp_count = resp_count_[k];
    c.resp_sum = resp_sum_[k];
    const double area = area_[k] + in_class_[k] * tail;
    const double busy = busy_area_[k] + busy_class_[k] * tail;
    c.l = area / window;
    c.w = c.resp_count > 0 ? c.resp_sum / static_cast<double>(c.resp_count)
                           : 0.0;
    c.pl = c.offered > 0
               ? static_cast<double>(c.lost) / static_cast<double>(c.offered)
               : 0.0;
    c.util_share = busy / (cfg_.servers * window);
    busy_total += busy;

    m.total.offered += c.offered;
    m.total.admitted += c.admitted;
    m.total.lost += c.lost;
    m.total.resp_count += c.resp_count;
    m.total.resp_sum += c.resp_sum;
    m.total.l += c.l;
    m.total.util_share += c.util_share;
  }
  m.total.w = m.total.resp_count > 0
                  ? m.total.resp_sum / static_cast<double>(m.total.resp_count)
                  : 0.0;
  m.total.pl = m.total.offered > 0
                   ? static_cast<double>(m.total.lost) /
                         static_cast<double>(m.total.offered)
                   : 0.0;
  m.utilization = busy_total / (cfg_.servers * window);
  m.lambda_eff = static_cast<double>(m.total.admitted) / window;
  return m;
}

bool QueueNode::conservation_ok() const {
  for (int k = 0; k < cfg_.num_classes; ++k) {
    if (offered_total_[k] != admitted_total_[k] + lost_total_[k]) return false;
    if (admitted_total_[k] !=
        departed_total_[k] + static_cast<std::uint64_t>(in_class_[k]))
      return false;
  }
  int total = 0;
  for (int k = 0; k < cfg_.num_classes; ++k) total += in_class_[k];
  return total == in_system_;
}

}  // namespace routerq
