#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace portwar {

enum class Backend { Table, Dqn };

std::string_view to_string(Backend backend);
std::optional<Backend> backend_from_string(std::string_view name);

struct AgentConfig {
    double alpha = 0.001;
    double gamma = 0.95;
    double eps_initial = 1.0;
    double eps_decay = 0.995;
    double eps_min = 0.05;
    int batch_size = 512;
    int buffer_capacity = 75'000;
    int target_sync_period = 1'000;  // environment steps
    int hidden_width = 128;          // both hidden layers of the DQN
    Backend backend = Backend::Table;

    /// Throws ConfigError with key "<prefix>.<field>".
    void validate(const std::string& prefix) const;
    bool operator==(const AgentConfig&) const = default;
};

AgentConfig attacker_defaults();
AgentConfig defender_defaults();

}  // namespace portwar
