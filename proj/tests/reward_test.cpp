#include <gtest/gtest.h>

#include "portwar/env.hpp"
#include "portwar/errors.hpp"
#include "portwar/reward.hpp"
#include "support.hpp"

namespace portwar {
namespace {

RewardPair one(EventKind kind, bool shaping = false, double amount = 1.0) {
    return score_event({kind, amount}, shaping);
}

TEST(Reward, TerminalAndTrapValues) {
    EXPECT_EQ(one(EventKind::SuccessfulExploit), (RewardPair{100.0, -100.0}));
    EXPECT_EQ(one(EventKind::TrapHit), (RewardPair{-80.0, 80.0}));
    EXPECT_EQ(one(EventKind::SuccessfulDefense), (RewardPair{-100.0, 100.0}));
}

TEST(Reward, AttackerCosts) {
    EXPECT_EQ(one(EventKind::ScanCost), (RewardPair{-0.125, 0.0}));
    EXPECT_EQ(one(EventKind::ExploitAttemptCost), (RewardPair{-0.25, 0.0}));
    EXPECT_EQ(one(EventKind::CancelCost), (RewardPair{-4.0, 0.0}));
    EXPECT_EQ(one(EventKind::ChangeIpCost), (RewardPair{-8.0, 0.0}));
}

TEST(Reward, DefenderCosts) {
    EXPECT_EQ(one(EventKind::RateLimitIpCost), (RewardPair{0.0, -8.0}));
    EXPECT_EQ(one(EventKind::RateLimitPortCost), (RewardPair{0.0, -12.0}));
    EXPECT_EQ(one(EventKind::ClosePortCost), (RewardPair{0.0, -40.0}));
    EXPECT_EQ(one(EventKind::TrapSetCost), (RewardPair{0.0, -4.0}));
    EXPECT_EQ(one(EventKind::BlockedBenignRequest), (RewardPair{0.0, -8.0}));
}

TEST(Reward, ShapingOnlyWhenEnabled) {
    EXPECT_EQ(one(EventKind::ProgressDelta, false, 30.0), (RewardPair{}));
    EXPECT_DOUBLE_EQ(one(EventKind::ProgressDelta, true, 30.0).attacker, 1.5);
    EXPECT_DOUBLE_EQ(one(EventKind::ProgressDelta, true, 30.0).defender, 0.0);
}

TEST(Reward, MirroredSetIsExactlyThree) {
    int mirrored = 0;
    for (int k = 0; k <= static_cast<int>(EventKind::ProgressDelta); ++k) {
        mirrored += is_mirrored(static_cast<EventKind>(k)) ? 1 : 0;
    }
    EXPECT_EQ(mirrored, 3);
}

TEST(Reward, MirroredSumsAreExactlyZero) {
    RewardTable table;
    table.successful_exploit = 0.1;
    table.trap_hit = -1.0 / 3.0;
    table.successful_defense = 1e10 + 0.7;
    Rng rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<RewardEvent> events;
        const auto n = rng.below(40);
        for (std::uint64_t i = 0; i < n; ++i) {
            events.push_back({static_cast<EventKind>(rng.below(13)), rng.uniform01() * 30});
        }
        const auto m = score_mirrored(events, table);
        EXPECT_EQ(m.attacker + m.defender, 0.0);
    }
}

TEST(Reward, TableValidationNamesKey) {
    RewardTable t;
    t.close_port = 5.0;
    try {
        t.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "reward.close_port");
    }
    EXPECT_NO_THROW(RewardTable{}.validate());
}

TEST(Reward, ShapedEpisodeAddsProgressOnVulnerablePortsOnly) {
    EnvConfig cfg = testing::fixed_threshold(300);
    cfg.shaping = true;
    auto s = new_episode(cfg, 5);
    const int v = testing::first_vulnerable(s);
    RewardPair total;
    while (!s.finished) total += score_events(step(s, attacker::Exploit{v}, defender::Wait{}).events, true);
    EXPECT_DOUBLE_EQ(total.attacker, 100.0 - 2.5 + 0.05 * 300);

    cfg.max_steps = 20;
    s = new_episode(cfg, 5);
    const int safe = testing::first_safe(s);
    int progress = 0;
    while (!s.finished) {
        progress += testing::count(step(s, attacker::Exploit{safe}, defender::Wait{}).events, EventKind::ProgressDelta);
    }
    EXPECT_EQ(progress, 0);
}

}  // namespace
}  // namespace portwar
