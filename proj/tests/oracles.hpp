#pragma once

#include <array>
#include <cstdint>

namespace portwar::oracles {

struct MdpResult {
    std::array<std::array<double, 2>, 2> q_star{};
    std::array<std::array<double, 2>, 2> learned{};
    double max_error = 0.0;
};

/// Deterministic two-state, two-action MDP. Value iteration gives Q*;
/// repeated sweeps of the tabular update over every (s, a) give the learned Q.
///   state 0: a0 -> 0, r = 0   a1 -> 1, r = 1
///   state 1: a0 -> 0, r = 2   a1 -> 1, r = 0
MdpResult two_state_mdp(double gamma = 0.9, double alpha = 0.5, int sweeps = 2000);

/// Largest relative error ||g - g_fd|| / (||g|| + ||g_fd||) between analytic
/// and central-difference gradients over `nets` random tiny networks.
double gradient_check(int nets, std::uint64_t seed);

}  // namespace portwar::oracles
