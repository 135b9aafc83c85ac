#pragma once

#include <span>
#include <string_view>

namespace portwar {

enum class EventKind {
    SuccessfulExploit,
    TrapHit,
    ScanCost,
    ExploitAttemptCost,
    CancelCost,
    ChangeIpCost,
    SuccessfulDefense,
    RateLimitIpCost,
    RateLimitPortCost,
    ClosePortCost,
    TrapSetCost,
    BlockedBenignRequest,
    ProgressDelta,
};

std::string_view to_string(EventKind kind);

/// Events that move the same magnitude from one side to the other.
constexpr bool is_mirrored(EventKind kind) {
    return kind == EventKind::SuccessfulExploit || kind == EventKind::TrapHit ||
           kind == EventKind::SuccessfulDefense;
}

struct RewardEvent {
    EventKind kind;
    double amount = 1.0;  // only meaningful for ProgressDelta (delivered requests)

    bool operator==(const RewardEvent&) const = default;
};

struct RewardPair {
    double attacker = 0.0;
    double defender = 0.0;

    RewardPair& operator+=(const RewardPair& other) {
        attacker += other.attacker;
        defender += other.defender;
        return *this;
    }
    friend RewardPair operator+(RewardPair a, const RewardPair& b) { return a += b; }
    bool operator==(const RewardPair&) const = default;
};

/// Per-event reward magnitudes. Mirrored entries are stated from the side that
/// gains (exploit/defense) or, for trap_hit, from the attacker's side; costs are
/// stated as the (negative) value charged to the acting side.
struct RewardTable {
    double successful_exploit = 100.0;
    double trap_hit = -80.0;
    double successful_defense = 100.0;

    double scan_cost = -0.125;
    double exploit_attempt = -0.25;
    double cancel = -4.0;
    double change_ip = -8.0;

    double rate_limit_ip = -8.0;
    double rate_limit_port = -12.0;
    double close_port = -40.0;
    double trap_set = -4.0;
    double blocked_benign = -8.0;

    double shaping_coef = 0.05;

    void validate() const;
    bool operator==(const RewardTable&) const = default;
};

/// Reward contribution of one event.
RewardPair score_event(const RewardEvent& event, bool shaping, const RewardTable& table = {});

/// Sum of score_event over the list.
RewardPair score_events(std::span<const RewardEvent> events, bool shaping,
                        const RewardTable& table = {});

/// Only the mirrored contributions; attacker + defender of the result is always 0.
RewardPair score_mirrored(std::span<const RewardEvent> events, const RewardTable& table = {});

}  // namespace portwar
