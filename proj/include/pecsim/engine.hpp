#pragma once

#include "pecsim/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pecsim {

enum class EventKind {
  PacketArrival,
  ExecComplete,
  TimerExpiry,
  Handover,
  Onboard,
  Offboard,
  ScenarioAction,
};

// Min-heap of closures ordered by (time, seq). The seq tiebreaker makes
// simultaneous events pop in schedule order.
class EventQueue {
public:
  struct Event {
    SimTime t;
    std::uint64_t seq;
    EventKind kind;
    std::function<void()> fn;
  };

  void schedule(SimTime t, EventKind kind, std::function<void()> fn)
  {
    heap_.push_back({t, next_seq_++, kind, std::move(fn)});
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  bool empty() const { return heap_.empty(); }

  SimTime next_time() const { return heap_.front().t; }

  Event pop()
  {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    return ev;
  }

private:
  static bool later(const Event& a, const Event& b)
  {
    if (a.t != b.t)
      return a.t > b.t;
    return a.seq > b.seq;
  }

  std::vector<Event> heap_;
  std::uint64_t next_seq_ = 0;
};

} // namespace pecsim
