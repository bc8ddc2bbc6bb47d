#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "routerq/engine.hpp"
#include "routerq/ge.hpp"
#include "routerq/packet.hpp"

namespace routerq {

enum class Discipline { FCFS, HOL };

struct NodeConfig {
  int servers = 1;    // c
  int capacity = 50;  // N: total packets in system, in-service included
  Discipline discipline = Discipline::FCFS;
  GEParams service{};  // shared by all classes
  int num_classes = 2;

  void validate() const;
};

// Per-packet lifecycle hook; used by trace tests and the CLI trace writer.
class NodeObserver {
 public:
  virtual ~NodeObserver() = default;
  virtual void on_admit(const Packet&, double /*now*/) {}
  virtual void on_service_start(const Packet&, double /*now*/) {}
  virtual void on_preempt(const Packet&, double /*now*/) {}
  virtual void on_depart(const Packet&, double /*now*/) {}
};

struct ClassNodeMetrics {
  double w = 0.0;           // mean response time over the window
  double l = 0.0;           // time-averaged packets in system
  double pl = 0.0;          // lost / offered
  double util_share = 0.0;  // busy time serving this class / (c * window)
  std::uint64_t offered = 0;
  std::uint64_t admitted = 0;
  std::uint64_t lost = 0;
  std::uint64_t resp_count = 0;
  double resp_sum = 0.0;
};

struct NodeMetrics {
  std::vector<ClassNodeMetrics> per_class;
  ClassNodeMetrics total;
  double utilization = 0.0;  // busy-server time / (c * window)
  double window = 0.0;
  double lambda_eff = 0.0;  // admitted / window
};

enum class ArrivalOutcome { Admitted, Lost };

// One GE/GE/c/N station with FCFS or HOL (preemptive-resume priority)
// discipline. Lower class index means higher priority. Service demand is
// drawn once at first service start; preempted packets keep their remaining
// demand and resume from the head of their class queue.
class QueueNode {
 public:
  QueueNode(std::uint16_t node_id, NodeConfig cfg);

  ArrivalOutcome on_arrival(Engine& eng, Rng& rng, PacketPool& pool,
                            std::uint32_t pkt, double now);

  // Returns the departed packet, or nullopt when the completion is stale
  // (its server epoch was invalidated by a preemption).
  std::optional<std::uint32_t> on_service_completion(Engine& eng, Rng& rng,
                                                     PacketPool& pool,
                                                     std::uint16_t server,
                                                     std::uint64_t epoch,
                                                     double now);

  // Moves the in-service packet on `victim_server` back to the head of its
  // class queue (remaining demand preserved) and starts `incoming` there.
  void preempt(Engine& eng, Rng& rng, PacketPool& pool, int victim_server,
               std::uint32_t incoming, double now);

  // Pops the next packet to serve, or nullopt when all queues are empty.
  std::optional<std::uint32_t> select_next();

  // Restarts all measurement accumulators at `now` (end of warm-up).
  void reset_window(double now);

  // Metrics over [window_start, now].
  NodeMetrics snapshot_metrics(double now) const;

  void set_observer(NodeObserver* obs) { observer_ = obs; }

  const NodeConfig& config() const { return cfg_; }
  std::uint16_t id() const { return node_id_; }
  int in_system() const { return in_system_; }
  int in_system_class(int k) const { return in_class_[k]; }
  int busy_servers() const { return busy_; }
  double window_start() const { return window_start_; }

  // Whole-run conservation ledger (never reset by the warm-up window).
  std::uint64_t offered_count(int k) const { return offered_total_[k]; }
  std::uint64_t admitted_count(int k) const { return admitted_total_[k]; }
  std::uint64_t lost_count(int k) const { return lost_total_[k]; }
  std::uint64_t departed_count(int k) const { return departed_total_[k]; }
  std::uint64_t preemption_count() const { return preemptions_; }

  // offered == admitted + lost and admitted == departed + in-system,
  // per class, as exact integers.
  bool conservation_ok() const;

 private:
  struct Server {
    std::uint32_t pkt = kNoPacket;
    std::uint64_t epoch = 0;  // bumped at every service start
  };

  void update_to(double now);
  void start_service(Engine& eng, Rng& rng, PacketPool& pool, int server,
                     std::uint32_t pkt, double now);
  int find_idle_server() const;
  int find_preemptable(const PacketPool& pool, int arriving_class) const;

  std::uint16_t node_id_;
  NodeConfig cfg_;
  GESampler service_sampler_;
  NodeObserver* observer_ = nullptr;

  std::vector<Server> servers_;
  int busy_ = 0;
  std::vector<int> busy_class_;
  std::deque<std::uint32_t> fifo_;                        // FCFS wait queue
  std::vector<std::deque<std::uint32_t>> class_queues_;   // HOL wait queues
  int in_system_ = 0;
  std::vector<int> in_class_;

  // Measurement window accumulators (cleared by reset_window).
  double window_start_ = 0.0;
  double last_update_ = 0.0;
  std::vector<double> area_;       // integral of per-class packets in system
  std::vector<double> busy_area_;  // integral of busy servers per class
  std::vector<double> resp_sum_;
  std::vector<std::uint64_t> resp_count_;
  std::vector<std::uint64_t> offered_w_, admitted_w_, lost_w_;

  // Whole-run ledger.
  std::vector<std::uint64_t> offered_total_, admitted_total_, lost_total_,
      departed_total_;
  std::uint64_t preemptions_ = 0;
};

}  // namespace routerq
