#include "portwar/agents/exploration.hpp"

#include <algorithm>
#include <cmath>

#include "portwar/errors.hpp"

namespace portwar {

std::string_view to_string(Backend backend) {
    return backend == Backend::Table ? "table" : "dqn";
}

std::optional<Backend> backend_from_string(std::string_view name) {
    if (name == "table") return Backend::Table;
    if (name == "dqn") return Backend::Dqn;
    return std::nullopt;
}

void AgentConfig::validate(const std::string& prefix) const {
    auto require = [&](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(prefix + "." + key, what);
    };
    require(std::isfinite(alpha) && alpha > 0.0, "alpha", "must be > 0");
    require(gamma >= 0.0 && gamma <= 1.0, "gamma", "must lie in [0, 1]");
    require(eps_min >= 0.0, "eps_min", "must be >= 0");
    require(eps_min <= eps_initial, "eps_min", "must be <= eps_initial");
    require(eps_initial <= 1.0, "eps_initial", "must be <= 1");
    require(eps_decay > 0.0 && eps_decay <= 1.0, "eps_decay", "must lie in (0, 1]");
    require(batch_size >= 1, "batch_size", "must be >= 1");
    require(buffer_capacity >= batch_size, "buffer_capacity", "must be >= batch_size");
    require(target_sync_period >= 1, "target_sync_period", "must be >= 1");
    require(hidden_width >= 1, "hidden_width", "must be >= 1");
}

AgentConfig attacker_defaults() { return AgentConfig{}; }

AgentConfig defender_defaults() {
    AgentConfig c;
    c.alpha = 0.002;
    c.gamma = 0.90;
    c.eps_decay = 0.99;
    return c;
}

double epsilon_at(const AgentConfig& c, long t) {
    if (t < 0) throw ContractViolation("epsilon_at: negative episode index");
    return std::max(c.eps_min, c.eps_initial * std::pow(c.eps_decay, static_cast<double>(t)));
}

long epsilon_floor_episode(const AgentConfig& c) {
    if (c.eps_initial <= c.eps_min) return 0;
    if (c.eps_decay == 1.0) return -1;
    long t = 0;
    // The closed form ln(min/initial)/ln(decay) can land one off under rounding;
    // walk forward from just below it instead.
    if (c.eps_min > 0.0) {
        const double guess = std::log(c.eps_min / c.eps_initial) / std::log(c.eps_decay);
        t = std::max(0L, static_cast<long>(std::floor(guess)) - 2);
    }
    while (epsilon_at(c, t) > c.eps_min) ++t;
    return t;
}

std::size_t argmax(std::span<const double> values) {
    if (values.empty()) throw ContractViolation("argmax: empty value array");
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::size_t select_action(std::span<const double> qvals, double eps, Rng& rng) {
    if (qvals.empty()) throw ContractViolation("select_action: empty value array");
    if (rng.uniform01() < eps) return static_cast<std::size_t>(rng.below(qvals.size()));
    return argmax(qvals);
}

}  // namespace portwar
