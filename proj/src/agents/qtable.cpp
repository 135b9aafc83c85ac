#include "portwar/agents/qtable.hpp"

#include <algorithm>
#include <string>

#include "portwar/errors.hpp"

namespace portwar {

SparseQTable::SparseQTable(std::size_t action_count) : zeros_(action_count, 0.0) {
    if (action_count == 0) throw ContractViolation("SparseQTable: action count must be >= 1");
}

std::span<const double> SparseQTable::values(const DiscreteKey& key) const {
    auto it = rows_.find(key);
    return it == rows_.end() ? std::span<const double>(zeros_) : std::span<const double>(it->second);
}

double SparseQTable::value(const DiscreteKey& key, std::size_t action) const {
    if (action >= action_count()) throw ContractViolation("SparseQTable: action out of range");
    return values(key)[action];
}

void SparseQTable::set(const DiscreteKey& key, std::size_t action, double v) {
    if (action >= action_count()) throw ContractViolation("SparseQTable: action out of range");
    auto [it, inserted] = rows_.try_emplace(key, zeros_);
    it->second[action] = v;
}

std::vector<std::pair<DiscreteKey, std::vector<double>>> SparseQTable::sorted_rows() const {
    std::vector<std::pair<DiscreteKey, std::vector<double>>> out(rows_.begin(), rows_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double qtable_update(SparseQTable& table, const DiscreteKey& s, std::size_t a, double r,
                     const DiscreteKey& s_next, bool terminal, const AgentConfig& config) {
    double bootstrap = 0.0;
    if (!terminal) {
        const auto next = table.values(s_next);
        bootstrap = *std::max_element(next.begin(), next.end());
    }
    const double q = table.value(s, a);
    const double updated = q + config.alpha * (r + config.gamma * bootstrap - q);
    table.set(s, a, updated);
    return updated;
}

}  // namespace portwar
