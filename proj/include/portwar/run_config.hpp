#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "portwar/agents/config.hpp"
#include "portwar/env.hpp"
#include "portwar/reward.hpp"

namespace portwar {

struct TrainSettings {
    int episodes = 20'000;
    int checkpoint_every = 500;
    bool attacker_learns = true;
    bool defender_learns = true;
    /// 0: both sides learn every episode. k > 0: learning alternates in blocks
    /// of k episodes, attacker first.
    int alternate_every = 0;

    bool operator==(const TrainSettings&) const = default;
};

struct EvalSettings {
    int episodes = 100;
    double epsilon = 0.0;

    bool operator==(const EvalSettings&) const = default;
};

struct RunConfig {
    EnvConfig env;
    RewardTable reward;
    AgentConfig attacker = attacker_defaults();
    AgentConfig defender = defender_defaults();
    TrainSettings train;
    EvalSettings eval;
    std::uint64_t seed = 1;

    /// Where train() writes its files; empty means in-memory only. Not part
    /// of the serialized config, so moving a run does not change its hash.
    std::filesystem::path output_dir;

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

/// Canonical nested JSON: {env, reward, attacker, defender, train, eval, seed}.
nlohmann::json to_json(const RunConfig& config);

/// Strict inverse of to_json: unknown keys and type mismatches raise
/// ConfigError naming the dotted path. Missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Applies "dotted.key=value" to a config document. The key must already
/// exist; the value is parsed as JSON when possible, else taken as a string
/// ("on"/"off" are accepted for booleans).
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Defaults, then the file (if any), then overrides, then validation.
RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::string>& overrides);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace portwar
