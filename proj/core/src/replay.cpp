#include "gebsim/replay.hpp"

#include <algorithm>
#include <stdexcept>

#include "gebsim/errors.hpp"

namespace gebsim {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("replay buffer capacity must be positive");
  }
  items_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) {
    throw IndexOutOfRangeError("replay index out of range");
  }
  if (items_.size() < capacity_) return items_[i];
  return items_[(head_ + i) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(
    std::size_t batch, std::mt19937_64& rng) const {
  if (batch > items_.size()) {
    throw std::invalid_argument("replay sample larger than buffer contents");
  }
  // Floyd's algorithm: `batch` distinct indices in O(batch) draws.
  std::vector<std::size_t> chosen;
  chosen.reserve(batch);
  for (std::size_t j = items_.size() - batch; j < items_.size(); ++j) {
    std::uniform_int_distribution<std::size_t> dist(0, j);
    const std::size_t idx = dist(rng);
    if (std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) {
      chosen.push_back(j);
    } else {
      chosen.push_back(idx);
    }
  }
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (std::size_t idx : chosen) out.push_back(&items_[idx]);
  return out;
}

}  // namespace gebsim
