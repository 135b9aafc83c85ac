#include "portwar/agents/replay.hpp"

#include <unordered_set>

#include "portwar/errors.hpp"

namespace portwar {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : slots_(capacity) {
    if (capacity == 0) throw ContractViolation("ReplayBuffer: capacity must be >= 1");
}

void ReplayBuffer::push(Transition tr) {
    slots_[head_] = std::move(tr);
    head_ = (head_ + 1) % slots_.size();
    if (size_ < slots_.size()) ++size_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
    if (i >= size_) throw ContractViolation("ReplayBuffer: index out of range");
    const std::size_t oldest = (head_ + slots_.size() - size_) % slots_.size();
    return slots_[(oldest + i) % slots_.size()];
}

std::optional<std::vector<const Transition*>> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    if (n > size_) return std::nullopt;
    std::vector<const Transition*> out;
    out.reserve(n);
    // Floyd's subset sampling: n draws, no O(size) scratch.
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(n * 2);
    for (std::size_t j = size_ - n; j < size_; ++j) {
        std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
        if (!chosen.insert(t).second) {
            chosen.insert(j);
            t = j;
        }
        out.push_back(&(*this)[t]);
    }
    return out;
}

}  // namespace portwar
