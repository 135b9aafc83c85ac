#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "portwar/agents/config.hpp"
#include "portwar/agents/dqn.hpp"
#include "portwar/agents/qtable.hpp"
#include "portwar/env.hpp"
#include "portwar/observe.hpp"

namespace portwar {

enum class Role : std::uint8_t { Attacker, Defender };

std::string_view to_string(Role role);

/// What a policy sees when deciding. Learned agents only read `obs`; the full
/// state is there for scripted opponents used in tests and evaluation.
struct DecisionContext {
    const ObsVector& obs;
    const EnvState& state;
};

class Agent {
public:
    virtual ~Agent() = default;

    virtual std::size_t choose(const DecisionContext& ctx, double eps, Rng& rng) = 0;
    virtual void learn(const Transition& /*tr*/) {}
};

/// Policy driven by a fixed function of the decision context; never learns.
class ScriptedAgent : public Agent {
public:
    using Script = std::function<std::size_t(const DecisionContext&)>;

    explicit ScriptedAgent(Script script) : script_(std::move(script)) {}

    std::size_t choose(const DecisionContext& ctx, double /*eps*/, Rng& /*rng*/) override {
        return script_(ctx);
    }

private:
    Script script_;
};

/// Uniformly random over `action_count` actions.
class RandomAgent : public Agent {
public:
    explicit RandomAgent(std::size_t action_count) : action_count_(action_count) {}

    std::size_t choose(const DecisionContext&, double, Rng& rng) override {
        return static_cast<std::size_t>(rng.below(action_count_));
    }

private:
    std::size_t action_count_;
};

class LearningAgent : public Agent {
public:
    LearningAgent(Role role, AgentConfig config, std::size_t obs_size, std::size_t action_count)
        : role_(role), config_(config), obs_size_(obs_size), action_count_(action_count) {}

    Role role() const { return role_; }
    const AgentConfig& config() const { return config_; }
    std::size_t obs_size() const { return obs_size_; }
    std::size_t action_count() const { return action_count_; }

    virtual std::vector<double> q_values(const ObsVector& obs) const = 0;

    std::size_t choose(const DecisionContext& ctx, double eps, Rng& rng) override;

    virtual void write(std::ostream& out) const = 0;

protected:
    Role role_;
    AgentConfig config_;
    std::size_t obs_size_;
    std::size_t action_count_;
};

class TabularAgent : public LearningAgent {
public:
    TabularAgent(Role role, AgentConfig config, BinSpec bins, std::size_t action_count);

    std::vector<double> q_values(const ObsVector& obs) const override;
    void learn(const Transition& tr) override;
    void write(std::ostream& out) const override;

    const SparseQTable& table() const { return table_; }
    SparseQTable& table() { return table_; }
    const BinSpec& bins() const { return bins_; }

private:
    BinSpec bins_;
    SparseQTable table_;
};

class DqnAgent : public LearningAgent {
public:
    /// Online weights from `init_rng`; target starts as an exact copy.
    DqnAgent(Role role, AgentConfig config, std::size_t obs_size, std::size_t action_count,
             Rng& init_rng, std::uint64_t sample_seed);

    std::vector<double> q_values(const ObsVector& obs) const override;
    void learn(const Transition& tr) override;
    void write(std::ostream& out) const override;

    const Mlp& online() const { return online_; }
    Mlp& online() { return online_; }
    const Mlp& target() const { return target_; }
    Mlp& target() { return target_; }
    const ReplayBuffer& replay() const { return replay_; }
    std::uint64_t env_steps() const { return env_steps_; }
    std::uint64_t train_steps() const { return train_steps_; }
    double last_loss() const { return last_loss_; }

private:
    friend std::unique_ptr<LearningAgent> read_agent(std::istream& in);

    Mlp online_;
    Mlp target_;
    ReplayBuffer replay_;
    Rng sample_rng_;
    std::uint64_t env_steps_ = 0;
    std::uint64_t train_steps_ = 0;
    double last_loss_ = 0.0;
};

/// Fresh agent for one side of the given environment.
std::unique_ptr<LearningAgent> make_agent(Role role, const AgentConfig& config,
                                          const EnvConfig& env, std::uint64_t seed);

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Versioned little-endian binary dump of config + parameters. Replay
/// contents and RNG streams are not persisted.
void write_agent(const LearningAgent& agent, std::ostream& out);
std::unique_ptr<LearningAgent> read_agent(std::istream& in);

void save_checkpoint(const LearningAgent& agent, const std::filesystem::path& path);
std::unique_ptr<LearningAgent> load_checkpoint(const std::filesystem::path& path);

}  // namespace portwar
