#include "portwar/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "portwar/agents/exploration.hpp"
#include "portwar/errors.hpp"
#include "portwar/metrics.hpp"
#include "portwar/observe.hpp"

namespace portwar {

namespace {

std::size_t checked(std::size_t action, std::size_t count, const char* side) {
    if (action >= count) {
        throw ContractViolation(std::string(side) + " chose action " + std::to_string(action) +
                                " of " + std::to_string(count));
    }
    return action;
}

void write_text(const std::filesystem::path& path, const std::string& text, long episode) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RunIoError(episode, "cannot open " + path.string());
    out << text;
    out.flush();
    if (!out) throw RunIoError(episode, "write failed for " + path.string());
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, Role role, long episode) {
    return dir / "checkpoints" / (std::string(to_string(role)) + "-" + std::to_string(episode));
}

void save_pair(const RunConfig& cfg, const LearningAgent& att, const LearningAgent& def, long episode) {
    try {
        save_checkpoint(att, checkpoint_path(cfg.output_dir, Role::Attacker, episode));
        save_checkpoint(def, checkpoint_path(cfg.output_dir, Role::Defender, episode));
    } catch (const std::exception& e) {
        throw RunIoError(episode, e.what());
    }
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t run_seed, long index) {
    return derive_seed(derive_seed(run_seed, 0x5EED), static_cast<std::uint64_t>(index));
}

EpisodeStats run_episode(const EnvConfig& env, const RewardTable& reward, Agent& attacker,
                         Agent& defender, std::uint64_t seed, const EpisodeOptions& opt) {
    EnvState state = new_episode(env, derive_seed(seed, 0));
    Rng action_rng(derive_seed(seed, 1));
    const std::size_t n_att = attacker_action_count(env);
    const std::size_t n_def = defender_action_count(env);

    EpisodeStats stats;
    stats.episode = opt.index;
    stats.attacker_eps = opt.attacker_eps;
    stats.defender_eps = opt.defender_eps;

    ObsVector att_obs = attacker_observe(state);
    while (!state.finished) {
        const std::size_t a = checked(attacker.choose({att_obs, state}, opt.attacker_eps, action_rng), n_att, "attacker");
        StepEvents att_events = attacker_act(state, decode_attacker_action(env, a));

        ObsVector def_obs = defender_observe(state);
        const std::size_t d = checked(defender.choose({def_obs, state}, opt.defender_eps, action_rng), n_def, "defender");
        StepEvents def_events = defender_act(state, decode_defender_action(env, d));

        StepEvents traffic = advance_traffic(state);

        RewardPair r = score_events(att_events.events, env.shaping, reward);
        r += score_events(def_events.events, env.shaping, reward);
        r += score_events(traffic.events, env.shaping, reward);
        stats.mirrored += score_mirrored(att_events.events, reward);
        stats.mirrored += score_mirrored(def_events.events, reward);
        stats.mirrored += score_mirrored(traffic.events, reward);

        stats.attacker_reward += r.attacker;
        stats.defender_reward += r.defender;
        stats.attacker_illegal += att_events.illegal ? 1 : 0;
        stats.defender_illegal += def_events.illegal ? 1 : 0;

        ObsVector att_next = attacker_observe(state);
        if (opt.attacker_learns) {
            attacker.learn(Transition{att_obs, a, r.attacker, att_next, state.finished});
        }
        if (opt.defender_learns) {
            defender.learn(Transition{std::move(def_obs), d, r.defender, defender_observe(state), state.finished});
        }
        att_obs = std::move(att_next);
        if (traffic.terminal.is_terminal()) stats.outcome = traffic.terminal;
    }
    stats.steps = state.step;
    return stats;
}

TrainingLog train(const RunConfig& config) {
    config.validate();
    auto attacker = make_agent(Role::Attacker, config.attacker, config.env, derive_seed(config.seed, 0xA7));
    auto defender = make_agent(Role::Defender, config.defender, config.env, derive_seed(config.seed, 0xDE));
    return train(config, *attacker, *defender);
}

TrainingLog train(const RunConfig& config, LearningAgent& attacker, LearningAgent& defender) {
    config.validate();
    TrainingLog log;
    log.config = config;
    log.seed = config.seed;
    log.episodes.reserve(static_cast<std::size_t>(config.train.episodes));

    const bool writing = !config.output_dir.empty();
    if (writing) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec) throw RunIoError(0, "cannot create " + config.output_dir.string() + ": " + ec.message());
        write_text(config.output_dir / "config.json", to_json(config).dump(2) + "\n", 0);
        const nlohmann::json layout{{"attacker", attacker_layout(config.env).to_json()},
                                    {"defender", defender_layout(config.env).to_json()}};
        write_text(config.output_dir / "layout.json", layout.dump(2) + "\n", 0);
    }

    using clock = std::chrono::steady_clock;
    auto block_start = clock::now();
    const long total = config.train.episodes;
    const long cadence = config.train.checkpoint_every;

    for (long ep = 0; ep < total; ++ep) {
        EpisodeOptions opt;
        opt.index = ep;
        opt.attacker_eps = epsilon_at(config.attacker, ep);
        opt.defender_eps = epsilon_at(config.defender, ep);
        opt.attacker_learns = config.train.attacker_learns;
        opt.defender_learns = config.train.defender_learns;
        if (config.train.alternate_every > 0) {
            const bool attacker_block = (ep / config.train.alternate_every) % 2 == 0;
            opt.attacker_learns = opt.attacker_learns && attacker_block;
            opt.defender_learns = opt.defender_learns && !attacker_block;
        }

        log.episodes.push_back(run_episode(config.env, config.reward, attacker, defender,
                                           episode_seed(config.seed, ep), opt));

        const bool block_end = cadence > 0 && (ep + 1) % cadence == 0;
        if (block_end || ep + 1 == total) {
            const auto now = clock::now();
            log.block_seconds.push_back(std::chrono::duration<double>(now - block_start).count());
            block_start = now;
            if (writing) save_pair(config, attacker, defender, ep + 1);
        }
    }

    if (writing) {
        write_text(config.output_dir / "episodes.csv", episodes_csv(log.episodes), total);
        write_text(config.output_dir / "summary.json", training_summary(log).dump(2) + "\n", total);
    }
    return log;
}

EvalReport evaluate(const EnvConfig& env, const RewardTable& reward, Agent& attacker, Agent& defender,
                    int n_episodes, double eps, std::uint64_t seed) {
    if (n_episodes < 1) throw ContractViolation("evaluate: need at least one episode");
    EvalReport report;
    report.episodes = n_episodes;
    double steps = 0.0;
    for (long ep = 0; ep < n_episodes; ++ep) {
        EpisodeOptions opt;
        opt.index = ep;
        opt.attacker_eps = eps;
        opt.defender_eps = eps;
        const auto stats = run_episode(env, reward, attacker, defender, episode_seed(seed, ep), opt);
        (stats.attacker_won() ? report.attacker_wins : report.defender_wins) += 1;
        report.outcomes[std::string(to_string(stats.outcome))] += 1;
        report.mean_attacker_reward += stats.attacker_reward;
        report.mean_defender_reward += stats.defender_reward;
        steps += stats.steps;
    }
    const double n = n_episodes;
    report.attacker_win_rate = report.attacker_wins / n;
    report.defender_win_rate = report.defender_wins / n;
    report.mean_attacker_reward /= n;
    report.mean_defender_reward /= n;
    report.mean_length = steps / n;
    report.strategic_balance = report.attacker_win_rate;
    return report;
}

EvalReport evaluate_checkpoints(const std::filesystem::path& attacker_ckpt,
                                const std::filesystem::path& defender_ckpt, const EnvConfig& env,
                                const RewardTable& reward, int n_episodes, double eps,
                                std::uint64_t seed) {
    auto attacker = load_checkpoint(attacker_ckpt);
    auto defender = load_checkpoint(defender_ckpt);
    auto check = [&](const LearningAgent& agent, Role role, std::size_t obs, std::size_t actions,
                     const std::filesystem::path& path) {
        if (agent.role() != role) {
            throw CheckpointError(path.string() + ": holds a " + std::string(to_string(agent.role())) +
                                  " agent, expected " + std::string(to_string(role)));
        }
        if (agent.obs_size() != obs || agent.action_count() != actions) {
            throw CheckpointError(path.string() + ": agent shape does not match the environment config");
        }
    };
    check(*attacker, Role::Attacker, attacker_layout(env).size(), attacker_action_count(env), attacker_ckpt);
    check(*defender, Role::Defender, defender_layout(env).size(), defender_action_count(env), defender_ckpt);
    return evaluate(env, reward, *attacker, *defender, n_episodes, eps, seed);
}

nlohmann::json EvalReport::to_json() const {
    return {{"episodes", episodes},
            {"attacker_wins", attacker_wins},
            {"defender_wins", defender_wins},
            {"attacker_win_rate", attacker_win_rate},
            {"defender_win_rate", defender_win_rate},
            {"mean_attacker_reward", mean_attacker_reward},
            {"mean_defender_reward", mean_defender_reward},
            {"mean_length", mean_length},
            {"strategic_balance", strategic_balance},
            {"outcomes", outcomes}};
}

std::string episodes_csv(const std::vector<EpisodeStats>& episodes) {
    std::string out = std::string(kEpisodesHeader) + "\n";
    char buf[256];
    for (const auto& e : episodes) {
        std::snprintf(buf, sizeof buf, "%ld,%.6f,%.6f,%s,%d,%.6f,%.6f\n", e.episode, e.attacker_reward,
                      e.defender_reward, std::string(to_string(e.outcome)).c_str(), e.steps,
                      e.attacker_eps, e.defender_eps);
        out += buf;
    }
    return out;
}

nlohmann::json training_summary(const TrainingLog& log) {
    std::vector<double> att, def;
    std::vector<bool> wins;
    std::map<std::string, int> outcomes;
    long att_illegal = 0, def_illegal = 0;
    for (const auto& e : log.episodes) {
        att.push_back(e.attacker_reward);
        def.push_back(e.defender_reward);
        wins.push_back(e.attacker_won());
        outcomes[std::string(to_string(e.outcome))] += 1;
        att_illegal += e.attacker_illegal;
        def_illegal += e.defender_illegal;
    }
    const double n = log.episodes.empty() ? 1.0 : static_cast<double>(log.episodes.size());
    long att_wins = 0;
    for (bool w : wins) att_wins += w ? 1 : 0;
    const auto ma_att = moving_average(att, 50);
    const auto ma_def = moving_average(def, 50);
    const auto rate = trailing_rate(wins, 100);

    return {{"episodes", log.episodes.size()},
            {"seed", log.seed},
            {"config_hash", config_hash(log.config)},
            {"attacker_win_rate", att_wins / n},
            {"defender_win_rate", (static_cast<double>(log.episodes.size()) - att_wins) / n},
            {"final_ma50_attacker", ma_att.empty() ? 0.0 : ma_att.back()},
            {"final_ma50_defender", ma_def.empty() ? 0.0 : ma_def.back()},
            {"last100_mean_attacker", tail_mean(att, 100)},
            {"last100_mean_defender", tail_mean(def, 100)},
            {"last100_attacker_win_rate", rate.empty() ? 0.0 : rate.back()},
            {"outcomes", outcomes},
            {"illegal_actions", {{"attacker", att_illegal}, {"defender", def_illegal}}}};
}

}  // namespace portwar
