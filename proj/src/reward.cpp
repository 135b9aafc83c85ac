#include "portwar/reward.hpp"

#include <cmath>

#include "portwar/errors.hpp"

namespace portwar {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::SuccessfulExploit: return "successful_exploit";
        case EventKind::TrapHit: return "trap_hit";
        case EventKind::ScanCost: return "scan_cost";
        case EventKind::ExploitAttemptCost: return "exploit_attempt";
        case EventKind::CancelCost: return "cancel";
        case EventKind::ChangeIpCost: return "change_ip";
        case EventKind::SuccessfulDefense: return "successful_defense";
        case EventKind::RateLimitIpCost: return "rate_limit_ip";
        case EventKind::RateLimitPortCost: return "rate_limit_port";
        case EventKind::ClosePortCost: return "close_port";
        case EventKind::TrapSetCost: return "trap_set";
        case EventKind::BlockedBenignRequest: return "blocked_benign";
        case EventKind::ProgressDelta: return "progress_delta";
    }
    return "unknown";
}

void RewardTable::validate() const {
    auto require = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(std::string("reward.") + key, what);
    };
    auto positive = [&](double v, const char* key) {
        require(std::isfinite(v) && v > 0.0, key, "must be a positive finite value");
    };
    auto cost = [&](double v, const char* key) {
        require(std::isfinite(v) && v <= 0.0, key, "costs must be finite and <= 0");
    };
    positive(successful_exploit, "successful_exploit");
    positive(successful_defense, "successful_defense");
    require(std::isfinite(trap_hit) && trap_hit < 0.0, "trap_hit",
            "must be negative (attacker's view)");
    cost(scan_cost, "scan_cost");
    cost(exploit_attempt, "exploit_attempt");
    cost(cancel, "cancel");
    cost(change_ip, "change_ip");
    cost(rate_limit_ip, "rate_limit_ip");
    cost(rate_limit_port, "rate_limit_port");
    cost(close_port, "close_port");
    cost(trap_set, "trap_set");
    cost(blocked_benign, "blocked_benign");
    require(std::isfinite(shaping_coef) && shaping_coef >= 0.0, "shaping_coef",
            "must be finite and >= 0");
}

RewardPair score_event(const RewardEvent& event, bool shaping, const RewardTable& t) {
    switch (event.kind) {
        case EventKind::SuccessfulExploit: return {t.successful_exploit, -t.successful_exploit};
        case EventKind::TrapHit: return {t.trap_hit, -t.trap_hit};
        case EventKind::SuccessfulDefense: return {-t.successful_defense, t.successful_defense};

        case EventKind::ScanCost: return {t.scan_cost, 0.0};
        case EventKind::ExploitAttemptCost: return {t.exploit_attempt, 0.0};
        case EventKind::CancelCost: return {t.cancel, 0.0};
        case EventKind::ChangeIpCost: return {t.change_ip, 0.0};

        case EventKind::RateLimitIpCost: return {0.0, t.rate_limit_ip};
        case EventKind::RateLimitPortCost: return {0.0, t.rate_limit_port};
        case EventKind::ClosePortCost: return {0.0, t.close_port};
        case EventKind::TrapSetCost: return {0.0, t.trap_set};
        case EventKind::BlockedBenignRequest: return {0.0, t.blocked_benign};

        case EventKind::ProgressDelta:
            return shaping ? RewardPair{event.amount * t.shaping_coef, 0.0} : RewardPair{};
    }
    return {};
}

RewardPair score_events(std::span<const RewardEvent> events, bool shaping,
                        const RewardTable& table) {
    RewardPair total;
    for (const auto& e : events) total += score_event(e, shaping, table);
    return total;
}

RewardPair score_mirrored(std::span<const RewardEvent> events, const RewardTable& table) {
    RewardPair total;
    for (const auto& e : events) {
        if (is_mirrored(e.kind)) total += score_event(e, false, table);
    }
    return total;
}

}  // namespace portwar
