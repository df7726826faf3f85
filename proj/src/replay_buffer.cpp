#include "laprl/replay_buffer.hpp"

#include "laprl/error.hpp"

namespace laprl {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw UsageError("replay capacity must be positive");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at_logical(size_t i) const {
  return storage_[(head_ + i) % storage_.size()];
}

std::vector<Segment> ReplayBuffer::sample_segments(int count, int n, RngStream& rng) const {
  std::vector<Segment> out;
  if (n < 1) throw UsageError("segment length must be >= 1");
  if (storage_.size() < static_cast<size_t>(n)) return out;  // skip signal
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    size_t start = static_cast<size_t>(rng.uniform_int(static_cast<int>(storage_.size())));
    Segment seg;
    for (int j = 0; j < n && start + j < storage_.size(); ++j) {
      const Transition& t = at_logical(start + j);
      seg.steps.push_back(&t);
      if (t.boundary) break;  // never cross an episode boundary
    }
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<const Transition*> ReplayBuffer::sample(int count, RngStream& rng) const {
  std::vector<const Transition*> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    size_t i = static_cast<size_t>(rng.uniform_int(static_cast<int>(storage_.size())));
    out.push_back(&at_logical(i));
  }
  return out;
}

}  // namespace laprl
