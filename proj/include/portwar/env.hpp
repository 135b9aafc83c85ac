#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "portwar/reward.hpp"
#include "portwar/rng.hpp"
#include "portwar/traffic_history.hpp"

namespace portwar {

struct EnvConfig {
    int n_ports = 12;
    int vulnerable_min = 3;
    int vulnerable_max = 7;
    int t_min = 300;
    int t_max = 600;
    int n_ips = 40;
    int attacker_ip_count = 4;
    int normal_req_min = 50;
    int normal_req_max = 70;
    double trap_detect_prob = 0.60;
    int exploit_rate = 30;
    int ip_change_min_actions = 10;
    int ip_rate_cap = 10;
    int port_rate_cap = 40;
    int max_steps = 500;
    int history_window = 150;
    bool shaping = false;

    /// Throws ConfigError naming the offending "env.<field>".
    void validate() const;
    bool operator==(const EnvConfig&) const = default;
};

struct PortState {
    bool vulnerable = false;
    int threshold = 0;  // T_p; 0 for non-vulnerable ports
    bool open = true;
    bool trapped = false;
    bool rate_limited = false;

    bool operator==(const PortState&) const = default;
};

enum class IpKind : std::uint8_t { Benign, AttackerReserved };

struct IpState {
    IpKind kind = IpKind::Benign;
    bool blacklisted = false;
    bool rate_limited = false;

    bool operator==(const IpState&) const = default;
};

/// What the attacker last learned about a port from scanning it.
enum class ScanCode : std::uint8_t { Unknown = 0, NotVulnerable = 1, Vulnerable = 2, VulnerableAnomaly = 3 };

enum class ActionOutcome : std::uint8_t { None = 0, Ok = 1, Illegal = 2 };

/// Snapshot of the single exploit process: source IP, target port, delivered counter.
struct ExploitStream {
    int source_ip = -1;
    int target_port = -1;
    std::int64_t counter = 0;
    bool active = false;

    bool operator==(const ExploitStream&) const = default;
};

/// Attacker-side bookkeeping. Counters are c_{ip,p} for the current IP; they
/// survive CancelExploit and are zeroed on ChangeIp.
struct AttackerState {
    std::vector<int> reserved_ips;  // shuffled use order
    int ip_cursor = 0;
    int actions_since_acquired = 0;
    std::vector<std::int64_t> counters;
    std::optional<int> stream_target;
    std::vector<ScanCode> scans;
    std::deque<ActionOutcome> recent;  // newest first, at most kRecentActions
    bool exploit_charged = false;      // ExploitAttemptCost already emitted this timestep

    int current_ip() const { return reserved_ips.at(static_cast<std::size_t>(ip_cursor)); }
    bool operator==(const AttackerState&) const = default;
};

inline constexpr std::size_t kRecentActions = 5;

namespace attacker {
struct Scan { int port; };
struct Exploit { int port; };
struct ChangeIp {};
struct CancelExploit {};
}  // namespace attacker

using AttackerAction =
    std::variant<attacker::Scan, attacker::Exploit, attacker::ChangeIp, attacker::CancelExploit>;

namespace defender {
struct Wait {};
struct RateLimitIp { int ip; };
struct RateLimitPort { int port; };
struct SetTrap { int port; };
struct ClosePort { int port; };
}  // namespace defender

using DefenderAction = std::variant<defender::Wait, defender::RateLimitIp, defender::RateLimitPort,
                                    defender::SetTrap, defender::ClosePort>;

/// Flat action indices used by the learners.
/// Attacker: [0,N) scan, [N,2N) exploit, 2N change-ip, 2N+1 cancel.
/// Defender: 0 wait, [1,1+M) rate-limit ip, then rate-limit port, set trap, close port (N each).
std::size_t attacker_action_count(const EnvConfig& cfg);
std::size_t defender_action_count(const EnvConfig& cfg);
AttackerAction decode_attacker_action(const EnvConfig& cfg, std::size_t index);
DefenderAction decode_defender_action(const EnvConfig& cfg, std::size_t index);
std::size_t encode(const EnvConfig& cfg, const AttackerAction& action);
std::size_t encode(const EnvConfig& cfg, const DefenderAction& action);

enum class DefenseReason : std::uint8_t { AllVulnerableClosed, AttackerIpsExhausted, SurvivedMaxSteps };

struct TerminalStatus {
    enum class Kind : std::uint8_t { Ongoing, AttackerWin, DefenderWin };
    Kind kind = Kind::Ongoing;
    DefenseReason reason = DefenseReason::SurvivedMaxSteps;  // only for DefenderWin

    static TerminalStatus ongoing() { return {}; }
    static TerminalStatus attacker_win() { return {Kind::AttackerWin, DefenseReason::SurvivedMaxSteps}; }
    static TerminalStatus defender_win(DefenseReason r) { return {Kind::DefenderWin, r}; }

    bool is_terminal() const { return kind != Kind::Ongoing; }
    bool operator==(const TerminalStatus& o) const {
        return kind == o.kind && (kind != Kind::DefenderWin || reason == o.reason);
    }
};

/// Stable short name: ongoing, attacker_win, defender_win_closed,
/// defender_win_exhausted, defender_win_timeout.
std::string_view to_string(const TerminalStatus& status);
std::optional<TerminalStatus> terminal_status_from_string(std::string_view name);

struct ScanResult {
    int port;
    bool vulnerable;
    bool anomaly;
};

/// Request accounting for one traffic advance. For every port,
/// generated == delivered + dropped.
struct TrafficSummary {
    std::vector<int> generated;
    std::vector<int> delivered;
    std::vector<int> dropped;
    int benign_generated = 0;
    int benign_dropped = 0;
    int exploit_attempted = 0;
    int exploit_delivered = 0;
};

struct StepEvents {
    std::vector<RewardEvent> events;
    bool illegal = false;
    std::optional<ScanResult> scan;
    std::optional<TrafficSummary> traffic;
    TerminalStatus terminal;  // set only by advance_traffic
};

enum class Turn : std::uint8_t { Attacker, Defender, Traffic };

struct EnvState {
    EnvConfig config;
    std::vector<PortState> ports;
    std::vector<IpState> ips;
    std::vector<int> benign_ips;
    AttackerState attacker;
    TrafficHistory history;
    Rng rng;
    int step = 0;
    Turn turn = Turn::Attacker;
    bool finished = false;

    ExploitStream stream() const;
    bool operator==(const EnvState&) const = default;
};

EnvState new_episode(const EnvConfig& config, std::uint64_t seed);

StepEvents attacker_act(EnvState& state, const AttackerAction& action);
StepEvents defender_act(EnvState& state, const DefenderAction& action);
StepEvents advance_traffic(EnvState& state);
TerminalStatus terminal_status(const EnvState& state);

/// One full timestep in the fixed order attacker -> defender -> traffic.
/// The three event lists are concatenated in that order.
StepEvents step(EnvState& state, const AttackerAction& att, const DefenderAction& def);

}  // namespace portwar
