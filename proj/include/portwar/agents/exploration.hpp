#pragma once

#include <cstddef>
#include <span>

#include "portwar/agents/config.hpp"
#include "portwar/rng.hpp"

namespace portwar {

/// max(eps_min, eps_initial * eps_decay^t) for episode index t.
double epsilon_at(const AgentConfig& config, long t);

/// First episode index at which the schedule sits on its floor, or -1 when
/// it never gets there (eps_decay == 1).
long epsilon_floor_episode(const AgentConfig& config);

/// Index of the largest value, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// Epsilon-greedy choice. Always consumes one uniform draw, plus one more
/// when exploring.
std::size_t select_action(std::span<const double> qvals, double eps, Rng& rng);

}  // namespace portwar
