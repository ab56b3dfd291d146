#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "crl/rng.hpp"

namespace crl {

constexpr int kObsDim = 6;

/// One environment step: observation, normalized action in [-1, 1], reward,
/// next observation, terminal flag.
struct Transition {
    std::array<double, kObsDim> obs{};
    double action = 0.0;
    double reward = 0.0;
    std::array<double, kObsDim> next_obs{};
    bool done = false;

    bool finite() const {
        for (double v : obs)
            if (!std::isfinite(v)) return false;
        for (double v : next_obs)
            if (!std::isfinite(v)) return false;
        return std::isfinite(action) && std::isfinite(reward) && std::abs(action) <= 1.0;
    }
};

/// Fixed-capacity ring store, oldest entry overwritten first. Mini-batches
/// are drawn uniformly without replacement.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 100000) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
        store_.reserve(std::min<std::size_t>(capacity_, 4096));
    }

    void push(const Transition& t) {
        if (!t.finite()) throw std::invalid_argument("ReplayBuffer: non-finite transition");
        if (store_.size() < capacity_) {
            store_.push_back(t);
        } else {
            store_[cursor_] = t;
            cursor_ = (cursor_ + 1) % capacity_;
        }
    }

    std::size_t size() const { return store_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return store_.empty(); }

    /// Storage-order access (used by the Fisher estimate, which consumes
    /// states deterministically).
    const Transition& operator[](std::size_t i) const { return store_[i]; }

    /// Uniform sample of m distinct stored transitions.
    std::vector<const Transition*> sample(std::size_t m, Rng& rng) const {
        if (m > store_.size()) throw std::invalid_argument("ReplayBuffer: batch larger than buffer");
        std::vector<const Transition*> batch;
        batch.reserve(m);
        std::vector<char> chosen(store_.size(), 0);
        while (batch.size() < m) {
            const std::size_t i = uniform_index(rng, store_.size());
            if (chosen[i]) continue;
            chosen[i] = 1;
            batch.push_back(&store_[i]);
        }
        return batch;
    }

  private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Transition> store_;
};

}  // namespace crl
