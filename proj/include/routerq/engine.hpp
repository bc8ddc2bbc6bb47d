#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace routerq {

enum class EventKind : std::uint8_t { ExternalArrival, ServiceCompletion };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;  // schedule-order tiebreaker, assigned by the engine
  EventKind kind = EventKind::ExternalArrival;
  std::uint32_t stream = 0;  // ExternalArrival: arrival stream index
  std::uint16_t node = 0;    // ServiceCompletion: node id
  std::uint16_t server = 0;  // ServiceCompletion: server index
  std::uint64_t epoch = 0;   // ServiceCompletion: server occupancy epoch
};

struct StopRule {
  enum class Kind { ArrivalCount, TimeHorizon };
  Kind kind = Kind::ArrivalCount;
  std::uint64_t arrival_limit = 0;
  double horizon = 0.0;

  static StopRule arrivals(std::uint64_t n) {
    return {Kind::ArrivalCount, n, 0.0};
  }
  static StopRule time_horizon(double t) {
    return {Kind::TimeHorizon, 0, t};
  }
};

// Virtual-clock event loop. Events are dispatched in (time, seq) order, so
// ties at equal timestamps resolve in schedule order and runs with the same
// seed replay bit-identically.
class Engine {
 public:
  double clock() const { return clock_; }
  std::uint64_t dispatched() const { return dispatched_; }
  std::uint64_t arrivals_dispatched() const { return arrivals_; }
  bool empty() const { return pending_.empty(); }
  std::size_t pending_count() const { return pending_.size(); }

  // Scheduling into the past is a simulator bug, not a domain outcome.
  void schedule(Event ev) {
    if (ev.time < clock_)
      throw std::logic_error("Engine::schedule: event time precedes clock");
    ev.seq = next_seq_++;
    pending_.push(ev);
  }

  void schedule_arrival(double time, std::uint32_t stream) {
    Event ev;
    ev.time = time;
    ev.kind = EventKind::ExternalArrival;
    ev.stream = stream;
    schedule(ev);
  }

  void schedule_completion(double time, std::uint16_t node,
                           std::uint16_t server, std::uint64_t epoch) {
    Event ev;
    ev.time = time;
    ev.kind = EventKind::ServiceCompletion;
    ev.node = node;
    ev.server = server;
    ev.epoch = epoch;
    schedule(ev);
  }

  std::optional<Event> next_event() {
    if (pending_.empty()) return std::nullopt;
    return pop();
  }

  // Dispatches events to `handler` until the stop rule fires or no events
  // remain. Arrival counting is cumulative over the engine's lifetime.
  template <typename Handler>
  void run(Handler&& handler, StopRule stop) {
    for (;;) {
      if (stop.kind == StopRule::Kind::ArrivalCount &&
          arrivals_ >= stop.arrival_limit)
        return;
      if (pending_.empty()) return;
      if (stop.kind == StopRule::Kind::TimeHorizon &&
          pending_.top().time > stop.horizon)
        return;
      handler(pop());
    }
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  Event pop() {
    Event ev = pending_.top();
    pending_.pop();
    clock_ = ev.time;
    ++dispatched_;
    if (ev.kind == EventKind::ExternalArrival) ++arrivals_;
    return ev;
  }

  double clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t arrivals_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> pending_;
};

}  // namespace routerq
