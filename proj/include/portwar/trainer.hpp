#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "portwar/agents/agent.hpp"
#include "portwar/env.hpp"
#include "portwar/reward.hpp"
#include "portwar/run_config.hpp"

namespace portwar {

struct EpisodeStats {
    long episode = 0;
    double attacker_reward = 0.0;
    double defender_reward = 0.0;
    TerminalStatus outcome;
    int steps = 0;
    int attacker_illegal = 0;
    int defender_illegal = 0;
    double attacker_eps = 0.0;
    double defender_eps = 0.0;
    /// Contributions of mirrored events only; always sums to zero.
    RewardPair mirrored;

    bool attacker_won() const { return outcome.kind == TerminalStatus::Kind::AttackerWin; }
    bool operator==(const EpisodeStats&) const = default;
};

struct TrainingLog {
    std::vector<EpisodeStats> episodes;
    RunConfig config;
    std::uint64_t seed = 0;
    /// Seconds per checkpoint block. Kept out of the metrics files.
    std::vector<double> block_seconds;
};

struct EpisodeOptions {
    long index = 0;
    double attacker_eps = 0.0;
    double defender_eps = 0.0;
    bool attacker_learns = false;
    bool defender_learns = false;
};

/// Plays one episode to its terminal state. Per timestep: attacker observes,
/// chooses and acts; defender observes, chooses and acts; traffic advances;
/// each learning side then receives its own (s, a, r, s') transition.
EpisodeStats run_episode(const EnvConfig& env, const RewardTable& reward, Agent& attacker,
                         Agent& defender, std::uint64_t seed, const EpisodeOptions& options);

/// Episode seed used by train() and evaluate() for episode `index`.
std::uint64_t episode_seed(std::uint64_t run_seed, long index);

/// Full training run. When config.output_dir is set, writes episodes.csv,
/// summary.json, config.json, layout.json and checkpoints/<side>-<episode>.
TrainingLog train(const RunConfig& config);

/// Same, continuing from the given agents instead of fresh ones.
TrainingLog train(const RunConfig& config, LearningAgent& attacker, LearningAgent& defender);

struct EvalReport {
    int episodes = 0;
    int attacker_wins = 0;
    int defender_wins = 0;
    double attacker_win_rate = 0.0;
    double defender_win_rate = 0.0;
    double mean_attacker_reward = 0.0;
    double mean_defender_reward = 0.0;
    double mean_length = 0.0;
    /// Attacker share of wins; parity is 0.5.
    double strategic_balance = 0.0;
    std::map<std::string, int> outcomes;

    nlohmann::json to_json() const;
    bool operator==(const EvalReport&) const = default;
};

/// Learning off, fixed epsilon for both sides.
EvalReport evaluate(const EnvConfig& env, const RewardTable& reward, Agent& attacker, Agent& defender,
                    int n_episodes, double eps, std::uint64_t seed);

/// Loads both checkpoints (CheckpointError on version/role/shape mismatch) and evaluates.
EvalReport evaluate_checkpoints(const std::filesystem::path& attacker_ckpt,
                                const std::filesystem::path& defender_ckpt, const EnvConfig& env,
                                const RewardTable& reward, int n_episodes, double eps,
                                std::uint64_t seed);

inline constexpr const char* kEpisodesHeader = "episode,att_reward,def_reward,outcome,steps,att_eps,def_eps";

/// episodes.csv body in fixed decimal notation.
std::string episodes_csv(const std::vector<EpisodeStats>& episodes);

/// summary.json content: win rates, final moving averages, config hash.
nlohmann::json training_summary(const TrainingLog& log);

}  // namespace portwar
