#pragma once

#include <span>

#include "portwar/agents/config.hpp"
#include "portwar/agents/mlp.hpp"
#include "portwar/agents/replay.hpp"

namespace portwar {

/// Builds the regression batch for a minibatch: y = r + gamma * max_a' target(s')[a'],
/// with no bootstrap on terminal transitions.
QRegressionBatch dqn_targets(const Mlp& target, std::span<const Transition* const> batch,
                             const AgentConfig& config);

/// One plain SGD step of the online network toward the target-network
/// bootstrap. Returns the loss before the step; throws TrainingDivergence when
/// the loss or the updated parameters are not finite.
double dqn_train_step(Mlp& online, const Mlp& target, std::span<const Transition* const> batch,
                      const AgentConfig& config);

/// target <- online (deep copy).
void sync_target(const Mlp& online, Mlp& target);

}  // namespace portwar
