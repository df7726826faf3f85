#pragma once

#include <Eigen/Core>
#include <vector>

#include "laprl/rng.hpp"

namespace laprl {

struct Transition {
  Eigen::VectorXd s, s_next;
  int action = -1;
  double reward = 0.0;
  bool done = false;      // goal-terminal; zeroes the bootstrap
  bool boundary = false;  // episode ended after this transition (goal or truncation)
  int s_id = -1, s_next_id = -1;
};

// Consecutive transitions from one episode, oldest first. Length <= n; shorter
// segments occur at episode boundaries and at the newest end of the buffer.
struct Segment {
  std::vector<const Transition*> steps;
};

// Uniform-sampling ring buffer. Single writer; sampling is const.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void push(Transition t);

  size_t size() const { return storage_.size(); }
  size_t capacity() const { return capacity_; }

  // `count` segments with uniform start positions, each extended up to n
  // transitions, truncated at episode boundaries. Empty result (skip signal)
  // when fewer than n transitions are stored.
  std::vector<Segment> sample_segments(int count, int n, RngStream& rng) const;

  // Uniform single transitions.
  std::vector<const Transition*> sample(int count, RngStream& rng) const;

  const Transition& at_logical(size_t i) const;  // 0 = oldest

 private:
  size_t capacity_;
  std::vector<Transition> storage_;
  size_t head_ = 0;  // next physical write slot once full
};

}  // namespace laprl
