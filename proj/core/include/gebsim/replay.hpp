#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace gebsim {

/// One stored interaction. The action index is the raw (pre-projection)
/// choice; the reward is the total reward including the safe-layer penalty.
struct Transition {
  Eigen::VectorXd s;
  std::int64_t action = 0;
  double reward = 0.0;
  Eigen::VectorXd s_next;
  bool done = false;
};

/// Fixed-capacity ring of transitions with FIFO eviction and uniform
/// without-replacement mini-batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// i-th oldest stored transition, i in [0, size).
  const Transition& at(std::size_t i) const;

  /// Draws `batch` distinct transitions uniformly. batch <= size().
  std::vector<const Transition*> sample(std::size_t batch,
                                        std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  ///< next write slot once full
  std::vector<Transition> items_;
};

}  // namespace gebsim
