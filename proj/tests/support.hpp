#pragma once

#include <vector>

#include "portwar/env.hpp"

namespace portwar::testing {

inline int first_vulnerable(const EnvState& s) {
    for (int p = 0; p < s.config.n_ports; ++p) {
        if (s.ports[static_cast<std::size_t>(p)].vulnerable) return p;
    }
    return -1;
}

inline int first_safe(const EnvState& s) {
    for (int p = 0; p < s.config.n_ports; ++p) {
        if (!s.ports[static_cast<std::size_t>(p)].vulnerable) return p;
    }
    return -1;
}

inline std::vector<int> vulnerable_ports(const EnvState& s) {
    std::vector<int> out;
    for (int p = 0; p < s.config.n_ports; ++p) {
        if (s.ports[static_cast<std::size_t>(p)].vulnerable) out.push_back(p);
    }
    return out;
}

inline int count(const std::vector<RewardEvent>& events, EventKind kind) {
    int n = 0;
    for (const auto& e : events) n += e.kind == kind ? 1 : 0;
    return n;
}

/// Config whose vulnerable thresholds are all exactly `t`.
inline EnvConfig fixed_threshold(int t) {
    EnvConfig c;
    c.t_min = t;
    c.t_max = t;
    return c;
}

}  // namespace portwar::testing
