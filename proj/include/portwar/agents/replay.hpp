#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "portwar/observe.hpp"
#include "portwar/rng.hpp"

namespace portwar {

struct Transition {
    ObsVector s;
    std::size_t a = 0;
    double r = 0.0;
    ObsVector s_next;
    bool terminal = false;

    bool operator==(const Transition&) const = default;
};

/// Fixed-capacity ring of transitions; pushing into a full buffer evicts the oldest.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition tr);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return slots_.size(); }

    /// i-th oldest stored transition.
    const Transition& operator[](std::size_t i) const;

    /// n distinct transitions drawn uniformly without replacement, or nullopt
    /// when fewer than n are stored.
    std::optional<std::vector<const Transition*>> sample(std::size_t n, Rng& rng) const;

private:
    std::vector<Transition> slots_;
    std::size_t head_ = 0;  // next write position
    std::size_t size_ = 0;
};

}  // namespace portwar
