#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "portwar/agents/exploration.hpp"
#include "portwar/errors.hpp"
#include "portwar/metrics.hpp"
#include "portwar/trainer.hpp"
#include "support.hpp"

namespace portwar {
namespace {

namespace fs = std::filesystem;

ScriptedAgent exploit_first_vulnerable(bool scan_first) {
    return ScriptedAgent([scan_first](const DecisionContext& ctx) -> std::size_t {
        const auto& s = ctx.state;
        const int v = testing::first_vulnerable(s);
        if (scan_first && s.step == 0) return encode(s.config, attacker::Scan{v});
        return encode(s.config, attacker::Exploit{v});
    });
}

ScriptedAgent waiting() {
    return ScriptedAgent([](const DecisionContext&) -> std::size_t { return 0; });
}

ScriptedAgent closing_vulnerable() {
    return ScriptedAgent([](const DecisionContext& ctx) -> std::size_t {
        const auto& s = ctx.state;
        for (int p : testing::vulnerable_ports(s)) {
            if (s.ports[static_cast<std::size_t>(p)].open) return encode(s.config, defender::ClosePort{p});
        }
        return 0;
    });
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("portwar_trainer_" + name);
    fs::remove_all(dir);
    return dir;
}

RunConfig small_run(int episodes) {
    RunConfig cfg;
    cfg.train.episodes = episodes;
    cfg.env.max_steps = 60;
    return cfg;
}

TEST(RunEpisode, ScriptedExploitWinsWithoutDefense) {
    auto att = exploit_first_vulnerable(false);
    auto def = waiting();
    const auto stats = run_episode(testing::fixed_threshold(300), RewardTable{}, att, def, 1, {});
    EXPECT_EQ(stats.steps, 10);
    EXPECT_TRUE(stats.attacker_won());
    EXPECT_DOUBLE_EQ(stats.attacker_reward, 97.5);
    EXPECT_DOUBLE_EQ(stats.defender_reward, -100.0);
    EXPECT_EQ(stats.mirrored.attacker + stats.mirrored.defender, 0.0);
}

TEST(RunEpisode, OneScanThenExploit) {
    auto att = exploit_first_vulnerable(true);
    auto def = waiting();
    const auto stats = run_episode(testing::fixed_threshold(300), RewardTable{}, att, def, 1, {});
    EXPECT_EQ(stats.steps, 11);
    EXPECT_DOUBLE_EQ(stats.attacker_reward, 97.375);
}

TEST(RunEpisode, ClosingAllVulnerablePortsWins) {
    RandomAgent att(26);
    auto def = closing_vulnerable();
    const auto stats = run_episode(EnvConfig{}, RewardTable{}, att, def, 3, {});
    EXPECT_EQ(stats.outcome, TerminalStatus::defender_win(DefenseReason::AllVulnerableClosed));
    EXPECT_LE(stats.steps, 7);
}

TEST(RunEpisode, DeterministicWithoutLearning) {
    RandomAgent a1(26), d1(77), a2(26), d2(77);
    EXPECT_EQ(run_episode(EnvConfig{}, RewardTable{}, a1, d1, 9, {}),
              run_episode(EnvConfig{}, RewardTable{}, a2, d2, 9, {}));
}

TEST(RunEpisode, OutOfRangeChoiceIsContractViolation) {
    ScriptedAgent att([](const DecisionContext&) -> std::size_t { return 26; });
    auto def = waiting();
    EXPECT_THROW(run_episode(EnvConfig{}, RewardTable{}, att, def, 1, {}), ContractViolation);
}

TEST(RunEpisode, MirroredRewardsCancelOverRandomRollouts) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomAgent att(26), def(77);
        const auto stats = run_episode(EnvConfig{}, RewardTable{}, att, def, seed, {});
        EXPECT_EQ(stats.mirrored.attacker + stats.mirrored.defender, 0.0);
        EXPECT_TRUE(stats.outcome.is_terminal());
        EXPECT_LE(stats.steps, 500);
    }
}

TEST(Train, EpsilonTraceFollowsSchedule) {
    const auto cfg = small_run(10);
    const auto log = train(cfg);
    ASSERT_EQ(log.episodes.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(log.episodes[i].episode, static_cast<long>(i));
        EXPECT_EQ(log.episodes[i].attacker_eps, epsilon_at(cfg.attacker, static_cast<long>(i)));
        EXPECT_EQ(log.episodes[i].defender_eps, epsilon_at(cfg.defender, static_cast<long>(i)));
    }
}

TEST(Train, WritesFilesAndCheckpoints) {
    auto cfg = small_run(12);
    cfg.train.checkpoint_every = 5;
    cfg.output_dir = scratch("files");
    train(cfg);
    for (const char* f : {"episodes.csv", "summary.json", "config.json", "layout.json"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
    }
    for (const char* f : {"attacker-5", "defender-5", "attacker-10", "defender-10", "attacker-12", "defender-12"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / "checkpoints" / f)) << f;
    }
    const auto csv = slurp(cfg.output_dir / "episodes.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kEpisodesHeader);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);

    const auto summary = nlohmann::json::parse(slurp(cfg.output_dir / "summary.json"));
    EXPECT_EQ(summary["episodes"], 12);
    EXPECT_EQ(summary["config_hash"], config_hash(cfg));
    EXPECT_DOUBLE_EQ(summary["attacker_win_rate"].get<double>() + summary["defender_win_rate"].get<double>(), 1.0);
    fs::remove_all(cfg.output_dir);
}

TEST(Train, SameConfigSameBytes) {
    auto a = small_run(25);
    auto b = a;
    a.output_dir = scratch("repro_a");
    b.output_dir = scratch("repro_b");
    train(a);
    train(b);
    EXPECT_EQ(slurp(a.output_dir / "episodes.csv"), slurp(b.output_dir / "episodes.csv"));
    EXPECT_EQ(slurp(a.output_dir / "summary.json"), slurp(b.output_dir / "summary.json"));
    EXPECT_EQ(slurp(a.output_dir / "checkpoints/defender-25"), slurp(b.output_dir / "checkpoints/defender-25"));
    fs::remove_all(a.output_dir);
    fs::remove_all(b.output_dir);
}

TEST(Train, FrozenSideDoesNotLearn) {
    auto cfg = small_run(5);
    cfg.train.attacker_learns = false;
    auto att = make_agent(Role::Attacker, cfg.attacker, cfg.env, 1);
    auto def = make_agent(Role::Defender, cfg.defender, cfg.env, 2);
    train(cfg, *att, *def);
    EXPECT_EQ(dynamic_cast<TabularAgent&>(*att).table().size(), 0u);
    EXPECT_GT(dynamic_cast<TabularAgent&>(*def).table().size(), 0u);
}

TEST(Train, AlternatingBlocks) {
    auto cfg = small_run(1);
    cfg.train.alternate_every = 1;
    auto att = make_agent(Role::Attacker, cfg.attacker, cfg.env, 1);
    auto def = make_agent(Role::Defender, cfg.defender, cfg.env, 2);
    train(cfg, *att, *def);
    EXPECT_GT(dynamic_cast<TabularAgent&>(*att).table().size(), 0u);
    EXPECT_EQ(dynamic_cast<TabularAgent&>(*def).table().size(), 0u);
}

TEST(Train, IoFailureReportsEpisode) {
    const auto blocker = scratch("blocker");
    std::ofstream(blocker) << "file, not a directory";
    auto cfg = small_run(2);
    cfg.output_dir = blocker / "run";
    try {
        train(cfg);
        FAIL() << "expected RunIoError";
    } catch (const RunIoError& e) {
        EXPECT_EQ(e.episode(), 0);
    }
    fs::remove_all(blocker);
}

TEST(Evaluate, UntrainedOutcomesPartition) {
    const RunConfig cfg;
    auto att = make_agent(Role::Attacker, cfg.attacker, cfg.env, 1);
    auto def = make_agent(Role::Defender, cfg.defender, cfg.env, 2);
    const auto r = evaluate(cfg.env, cfg.reward, *att, *def, 100, 0.0, 5);
    EXPECT_EQ(r.attacker_wins + r.defender_wins, 100);
    EXPECT_DOUBLE_EQ(r.attacker_win_rate + r.defender_win_rate, 1.0);
    EXPECT_DOUBLE_EQ(r.strategic_balance, r.attacker_win_rate);
    EXPECT_EQ(r, evaluate(cfg.env, cfg.reward, *att, *def, 100, 0.0, 5));
}

TEST(Evaluate, ClosingDefenderAlwaysWins) {
    RandomAgent att(26);
    auto def = closing_vulnerable();
    const auto r = evaluate(EnvConfig{}, RewardTable{}, att, def, 50, 0.0, 8);
    EXPECT_DOUBLE_EQ(r.defender_win_rate, 1.0);
    EXPECT_EQ(r.outcomes.at("defender_win_closed"), 50);
}

TEST(Evaluate, CheckpointRoleMismatch) {
    const auto dir = scratch("roles");
    const RunConfig cfg;
    const auto att = make_agent(Role::Attacker, cfg.attacker, cfg.env, 1);
    const auto def = make_agent(Role::Defender, cfg.defender, cfg.env, 1);
    save_checkpoint(*att, dir / "a");
    save_checkpoint(*def, dir / "d");
    EXPECT_NO_THROW(evaluate_checkpoints(dir / "a", dir / "d", cfg.env, cfg.reward, 2, 0.0, 1));
    EXPECT_THROW(evaluate_checkpoints(dir / "d", dir / "a", cfg.env, cfg.reward, 2, 0.0, 1), CheckpointError);
    EnvConfig wider = cfg.env;
    wider.n_ports = 13;
    EXPECT_THROW(evaluate_checkpoints(dir / "a", dir / "d", wider, cfg.reward, 2, 0.0, 1), CheckpointError);
    fs::remove_all(dir);
}

TEST(Metrics, MovingAverage) {
    EXPECT_TRUE(moving_average(std::vector<double>{}).empty());
    EXPECT_EQ(moving_average(std::vector<double>{0, 100}, 2), (std::vector<double>{0, 50}));
    const std::vector<double> flat(30, 4.5);
    for (double v : moving_average(flat)) EXPECT_DOUBLE_EQ(v, 4.5);

    std::vector<double> series;
    Rng rng(1);
    for (int i = 0; i < 200; ++i) series.push_back(rng.uniform01() * 200 - 100);
    const auto ma = moving_average(series, 50);
    ASSERT_EQ(ma.size(), 200u);
    double sum = 0;
    for (int i = 150; i < 200; ++i) sum += series[static_cast<std::size_t>(i)];
    EXPECT_NEAR(ma[199], sum / 50, 1e-12);
    EXPECT_THROW(moving_average(series, 0), ContractViolation);
}

TEST(Metrics, TrailingRateAndTailMean) {
    const std::vector<bool> flags{true, false, true, true};
    EXPECT_EQ(trailing_rate(flags, 2), (std::vector<double>{1.0, 0.5, 0.5, 1.0}));
    const std::vector<double> xs{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(tail_mean(xs, 2), 3.5);
    EXPECT_DOUBLE_EQ(tail_mean(xs, 10), 2.5);
    EXPECT_DOUBLE_EQ(tail_mean(std::vector<double>{}, 3), 0.0);
}

}  // namespace
}  // namespace portwar
