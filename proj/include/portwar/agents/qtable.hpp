#pragma once

#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "portwar/agents/config.hpp"
#include "portwar/observe.hpp"

namespace portwar {

/// Action values keyed by discretized observation. Keys never written read
/// as all-zero rows and are not inserted by reads.
class SparseQTable {
public:
    explicit SparseQTable(std::size_t action_count);

    std::size_t action_count() const { return zeros_.size(); }
    std::size_t size() const { return rows_.size(); }
    bool contains(const DiscreteKey& key) const { return rows_.contains(key); }

    std::span<const double> values(const DiscreteKey& key) const;
    double value(const DiscreteKey& key, std::size_t action) const;
    void set(const DiscreteKey& key, std::size_t action, double v);

    /// Rows ordered by key, for deterministic serialization.
    std::vector<std::pair<DiscreteKey, std::vector<double>>> sorted_rows() const;

    bool operator==(const SparseQTable&) const = default;

private:
    std::unordered_map<DiscreteKey, std::vector<double>, DiscreteKeyHash> rows_;
    std::vector<double> zeros_;
};

/// One-step Q-learning update; returns the new Q(s, a). Terminal transitions
/// do not bootstrap.
double qtable_update(SparseQTable& table, const DiscreteKey& s, std::size_t a, double r,
                     const DiscreteKey& s_next, bool terminal, const AgentConfig& config);

}  // namespace portwar
