#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace routerq {

inline constexpr std::uint32_t kNoPacket =
    std::numeric_limits<std::uint32_t>::max();

struct Packet {
  std::uint64_t id = 0;
  int klass = 0;  // priority index: 0 = high (VT), 1 = low (FF)
  double network_arrival_time = 0.0;
  double node_arrival_time = 0.0;
  double service_demand = -1.0;  // drawn at first service start; < 0 = unset
  double remaining_service = 0.0;
  double service_started = 0.0;  // valid while in_service
  bool in_service = false;
};

// Slot pool with a free list. Indices stay stable while a packet is live;
// ids are unique for the lifetime of the pool.
class PacketPool {
 public:
  std::uint32_t create() {
    std::uint32_t idx;
    if (!free_.empty()) {
      idx = free_.back();
      free_.pop_back();
      slots_[idx] = Packet{};
    } else {
      idx = static_cast<std::uint32_t>(slots_.size());
      slots_.emplace_back();
    }
    slots_[idx].id = next_id_++;
    ++live_;
    return idx;
  }

  void release(std::uint32_t idx) {
    free_.push_back(idx);
    --live_;
  }

  Packet& operator[](std::uint32_t idx) { return slots_[idx]; }
  const Packet& operator[](std::uint32_t idx) const { return slots_[idx]; }

  std::uint64_t live() const { return live_; }
  std::uint64_t created() const { return next_id_; }

 private:
  std::vector<Packet> slots_;
  std::vector<std::uint32_t> free_;
  std::uint64_t next_id_ = 0;
  std::uint64_t live_ = 0;
};

}  // namespace routerq
