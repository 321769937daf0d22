#pragma once

#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace par {

/// Time-ordered queue. Events pop in (time, insertion order), so equal
/// timestamps resolve deterministically.
template <typename Payload>
class EventQueue {
 public:
  struct Event {
    double time;
    std::uint64_t insertion_seq;
    Payload payload;
  };

  void push(double time, Payload payload) {
    heap_.push(Event{time, next_seq_++, std::move(payload)});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  Event pop() {
    Event e = std::move(const_cast<Event&>(heap_.top()));
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.insertion_seq > b.insertion_seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_{0};
};

}  // namespace par
