#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "autohedge/market.hpp"

namespace autohedge::drl {

struct Experience {
  std::vector<double> obs;
  double action = 0.0;
  double reward = 0.0;    // n-step discounted reward sum
  double discount = 0.0;  // gamma^n, 0 when the episode ended inside the window
  std::vector<double> next_obs;
  long id = 0;            // insertion counter
};

/// FIFO ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be >= 1");
  }

  void push(Experience e) {
    e.id = inserted_++;
    if (data_.size() < capacity_) {
      data_.push_back(std::move(e));
    } else {
      data_[head_] = std::move(e);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  long inserted() const { return inserted_; }
  const Experience& at(std::size_t i) const { return data_.at(i); }

  std::vector<std::size_t> sample(std::size_t batch, RngStream& rng) const {
    if (data_.empty()) throw std::logic_error("sampling from an empty replay buffer");
    std::vector<std::size_t> idx(batch);
    for (auto& i : idx) {
      i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(data_.size()));
      if (i >= data_.size()) i = data_.size() - 1;
    }
    return idx;
  }

 private:
  std::size_t capacity_;
  std::vector<Experience> data_;
  std::size_t head_ = 0;
  long inserted_ = 0;
};

}  // namespace autohedge::drl
