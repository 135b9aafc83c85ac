#include "portwar/env.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "portwar/errors.hpp"

namespace portwar {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(std::string("env.") + key, what);
}

void check_port(const EnvState& s, int port) {
    if (port < 0 || port >= s.config.n_ports) {
        throw ContractViolation("port index " + std::to_string(port) + " out of range [0, " +
                                std::to_string(s.config.n_ports) + ")");
    }
}

void check_ip(const EnvState& s, int ip) {
    if (ip < 0 || ip >= s.config.n_ips) {
        throw ContractViolation("ip index " + std::to_string(ip) + " out of range [0, " +
                                std::to_string(s.config.n_ips) + ")");
    }
}

void check_turn(const EnvState& s, Turn expected, const char* who) {
    if (s.finished) throw ContractViolation(std::string(who) + ": episode already terminal");
    if (s.turn != expected) throw ContractViolation(std::string(who) + ": not this side's turn");
}

ScanCode scan_code(bool vulnerable, bool anomaly) {
    if (!vulnerable) return ScanCode::NotVulnerable;
    return anomaly ? ScanCode::VulnerableAnomaly : ScanCode::Vulnerable;
}

}  // namespace

void EnvConfig::validate() const {
    require(n_ports >= 1, "n_ports", "must be >= 1");
    require(vulnerable_min >= 1, "vulnerable_min", "must be >= 1");
    require(vulnerable_min <= vulnerable_max, "vulnerable_min", "must be <= vulnerable_max");
    require(vulnerable_max <= n_ports, "vulnerable_max", "must be <= n_ports");
    require(t_min >= 1, "t_min", "must be >= 1");
    require(t_min <= t_max, "t_min", "must be <= t_max");
    require(attacker_ip_count >= 1, "attacker_ip_count", "must be >= 1");
    require(attacker_ip_count < n_ips, "attacker_ip_count", "must be < n_ips");
    require(normal_req_min >= 0, "normal_req_min", "must be >= 0");
    require(normal_req_min <= normal_req_max, "normal_req_min", "must be <= normal_req_max");
    require(trap_detect_prob >= 0.0 && trap_detect_prob <= 1.0, "trap_detect_prob",
            "must lie in [0, 1]");
    require(exploit_rate >= 1, "exploit_rate", "must be >= 1");
    require(ip_change_min_actions >= 0, "ip_change_min_actions", "must be >= 0");
    require(ip_rate_cap >= 0, "ip_rate_cap", "must be >= 0");
    require(port_rate_cap >= 0, "port_rate_cap", "must be >= 0");
    require(max_steps >= 1, "max_steps", "must be >= 1");
    require(history_window >= 1, "history_window", "must be >= 1");
}

std::size_t attacker_action_count(const EnvConfig& cfg) {
    return 2 * static_cast<std::size_t>(cfg.n_ports) + 2;
}

std::size_t defender_action_count(const EnvConfig& cfg) {
    return 1 + static_cast<std::size_t>(cfg.n_ips) + 3 * static_cast<std::size_t>(cfg.n_ports);
}

AttackerAction decode_attacker_action(const EnvConfig& cfg, std::size_t index) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    if (index < n) return attacker::Scan{static_cast<int>(index)};
    if (index < 2 * n) return attacker::Exploit{static_cast<int>(index - n)};
    if (index == 2 * n) return attacker::ChangeIp{};
    if (index == 2 * n + 1) return attacker::CancelExploit{};
    throw ContractViolation("attacker action index " + std::to_string(index) + " out of range");
}

DefenderAction decode_defender_action(const EnvConfig& cfg, std::size_t index) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    const auto m = static_cast<std::size_t>(cfg.n_ips);
    if (index == 0) return defender::Wait{};
    std::size_t i = index - 1;
    if (i < m) return defender::RateLimitIp{static_cast<int>(i)};
    i -= m;
    if (i < n) return defender::RateLimitPort{static_cast<int>(i)};
    i -= n;
    if (i < n) return defender::SetTrap{static_cast<int>(i)};
    i -= n;
    if (i < n) return defender::ClosePort{static_cast<int>(i)};
    throw ContractViolation("defender action index " + std::to_string(index) + " out of range");
}

std::size_t encode(const EnvConfig& cfg, const AttackerAction& action) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    return std::visit(overloaded{
                          [&](const attacker::Scan& a) { return static_cast<std::size_t>(a.port); },
                          [&](const attacker::Exploit& a) { return n + static_cast<std::size_t>(a.port); },
                          [&](const attacker::ChangeIp&) { return 2 * n; },
                          [&](const attacker::CancelExploit&) { return 2 * n + 1; },
                      },
                      action);
}

std::size_t encode(const EnvConfig& cfg, const DefenderAction& action) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    const auto m = static_cast<std::size_t>(cfg.n_ips);
    return std::visit(
        overloaded{
            [&](const defender::Wait&) -> std::size_t { return 0; },
            [&](const defender::RateLimitIp& a) { return 1 + static_cast<std::size_t>(a.ip); },
            [&](const defender::RateLimitPort& a) { return 1 + m + static_cast<std::size_t>(a.port); },
            [&](const defender::SetTrap& a) { return 1 + m + n + static_cast<std::size_t>(a.port); },
            [&](const defender::ClosePort& a) { return 1 + m + 2 * n + static_cast<std::size_t>(a.port); },
        },
        action);
}

std::string_view to_string(const TerminalStatus& status) {
    switch (status.kind) {
        case TerminalStatus::Kind::Ongoing: return "ongoing";
        case TerminalStatus::Kind::AttackerWin: return "attacker_win";
        case TerminalStatus::Kind::DefenderWin:
            switch (status.reason) {
                case DefenseReason::AllVulnerableClosed: return "defender_win_closed";
                case DefenseReason::AttackerIpsExhausted: return "defender_win_exhausted";
                case DefenseReason::SurvivedMaxSteps: return "defender_win_timeout";
            }
    }
    return "unknown";
}

std::optional<TerminalStatus> terminal_status_from_string(std::string_view name) {
    for (auto s : {TerminalStatus::ongoing(), TerminalStatus::attacker_win(),
                   TerminalStatus::defender_win(DefenseReason::AllVulnerableClosed),
                   TerminalStatus::defender_win(DefenseReason::AttackerIpsExhausted),
                   TerminalStatus::defender_win(DefenseReason::SurvivedMaxSteps)}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

ExploitStream EnvState::stream() const {
    ExploitStream s;
    if (attacker.reserved_ips.empty()) return s;
    s.source_ip = attacker.current_ip();
    if (attacker.stream_target) {
        s.target_port = *attacker.stream_target;
        s.counter = attacker.counters[static_cast<std::size_t>(s.target_port)];
        s.active = true;
    }
    return s;
}

EnvState new_episode(const EnvConfig& config, std::uint64_t seed) {
    config.validate();

    EnvState s;
    s.config = config;
    s.rng = Rng(seed);
    s.ports.assign(static_cast<std::size_t>(config.n_ports), PortState{});
    s.ips.assign(static_cast<std::size_t>(config.n_ips), IpState{});

    const auto n_vulnerable = s.rng.uniform_int(config.vulnerable_min, config.vulnerable_max);
    std::vector<int> order(static_cast<std::size_t>(config.n_ports));
    std::iota(order.begin(), order.end(), 0);
    s.rng.shuffle(order.begin(), order.end());
    order.resize(static_cast<std::size_t>(n_vulnerable));
    std::sort(order.begin(), order.end());
    for (int p : order) {
        auto& port = s.ports[static_cast<std::size_t>(p)];
        port.vulnerable = true;
        port.threshold = static_cast<int>(s.rng.uniform_int(config.t_min, config.t_max));
    }

    std::vector<int> ip_order(static_cast<std::size_t>(config.n_ips));
    std::iota(ip_order.begin(), ip_order.end(), 0);
    s.rng.shuffle(ip_order.begin(), ip_order.end());
    s.attacker.reserved_ips.assign(ip_order.begin(), ip_order.begin() + config.attacker_ip_count);
    for (int ip : s.attacker.reserved_ips) s.ips[static_cast<std::size_t>(ip)].kind = IpKind::AttackerReserved;
    for (int ip = 0; ip < config.n_ips; ++ip) {
        if (s.ips[static_cast<std::size_t>(ip)].kind == IpKind::Benign) s.benign_ips.push_back(ip);
    }

    s.attacker.counters.assign(static_cast<std::size_t>(config.n_ports), 0);
    s.attacker.scans.assign(static_cast<std::size_t>(config.n_ports), ScanCode::Unknown);
    s.history = TrafficHistory(config.n_ports, config.n_ips, config.history_window);
    return s;
}

StepEvents attacker_act(EnvState& s, const AttackerAction& action) {
    check_turn(s, Turn::Attacker, "attacker_act");
    std::visit(overloaded{
                   [&](const attacker::Scan& a) { check_port(s, a.port); },
                   [&](const attacker::Exploit& a) { check_port(s, a.port); },
                   [](const auto&) {},
               },
               action);

    StepEvents out;
    auto& att = s.attacker;
    bool ip_changed = false;

    std::visit(
        overloaded{
            [&](const attacker::Scan& a) {
                out.events.push_back({EventKind::ScanCost});
                const auto& port = s.ports[static_cast<std::size_t>(a.port)];
                const bool anomaly = port.trapped && s.rng.bernoulli(s.config.trap_detect_prob);
                out.scan = ScanResult{a.port, port.vulnerable, anomaly};
                att.scans[static_cast<std::size_t>(a.port)] = scan_code(port.vulnerable, anomaly);
            },
            [&](const attacker::Exploit& a) {
                out.events.push_back({EventKind::ExploitAttemptCost});
                att.exploit_charged = true;
                const bool blacklisted = s.ips[static_cast<std::size_t>(att.current_ip())].blacklisted;
                if (blacklisted || (att.stream_target && *att.stream_target != a.port)) {
                    out.illegal = true;
                } else {
                    att.stream_target = a.port;
                }
            },
            [&](const attacker::ChangeIp&) {
                out.events.push_back({EventKind::ChangeIpCost});
                const bool allowed =
                    att.actions_since_acquired >= s.config.ip_change_min_actions &&
                    static_cast<std::size_t>(att.ip_cursor) + 1 < att.reserved_ips.size();
                if (!allowed) {
                    out.illegal = true;
                    return;
                }
                ++att.ip_cursor;
                std::fill(att.counters.begin(), att.counters.end(), 0);
                ip_changed = true;
            },
            [&](const attacker::CancelExploit&) {
                out.events.push_back({EventKind::CancelCost});
                if (!att.stream_target) {
                    out.illegal = true;
                    return;
                }
                att.stream_target.reset();
            },
        },
        action);

    att.actions_since_acquired = ip_changed ? 0 : att.actions_since_acquired + 1;
    att.recent.push_front(out.illegal ? ActionOutcome::Illegal : ActionOutcome::Ok);
    if (att.recent.size() > kRecentActions) att.recent.pop_back();
    s.turn = Turn::Defender;
    return out;
}

StepEvents defender_act(EnvState& s, const DefenderAction& action) {
    check_turn(s, Turn::Defender, "defender_act");
    StepEvents out;

    auto port_defense = [&](int p, EventKind cost) -> PortState* {
        check_port(s, p);
        out.events.push_back({cost});
        auto& port = s.ports[static_cast<std::size_t>(p)];
        if (!port.open) {
            out.illegal = true;
            return nullptr;
        }
        return &port;
    };

    std::visit(overloaded{
                   [&](const defender::Wait&) {},
                   [&](const defender::RateLimitIp& a) {
                       check_ip(s, a.ip);
                       out.events.push_back({EventKind::RateLimitIpCost});
                       s.ips[static_cast<std::size_t>(a.ip)].rate_limited = true;
                   },
                   [&](const defender::RateLimitPort& a) {
                       if (auto* port = port_defense(a.port, EventKind::RateLimitPortCost)) {
                           port->rate_limited = true;
                       }
                   },
                   [&](const defender::SetTrap& a) {
                       if (auto* port = port_defense(a.port, EventKind::TrapSetCost)) port->trapped = true;
                   },
                   [&](const defender::ClosePort& a) {
                       if (auto* port = port_defense(a.port, EventKind::ClosePortCost)) {
                           port->open = false;
                           port->trapped = false;
                       }
                   },
               },
               action);

    s.turn = Turn::Traffic;
    return out;
}

StepEvents advance_traffic(EnvState& s) {
    check_turn(s, Turn::Traffic, "advance_traffic");
    const auto& cfg = s.config;
    const auto n_ports = static_cast<std::size_t>(cfg.n_ports);
    const auto n_ips = static_cast<std::size_t>(cfg.n_ips);

    StepEvents out;
    TrafficSummary summary;
    summary.generated.assign(n_ports, 0);
    summary.delivered.assign(n_ports, 0);
    summary.dropped.assign(n_ports, 0);

    std::vector<int> attempted(n_ips * n_ports, 0);
    std::vector<int> dropped(n_ips * n_ports, 0);
    std::vector<int> ip_used(n_ips, 0);
    std::vector<int> port_used(n_ports, 0);

    // Room left under the active rate limits for one more request.
    auto capacity = [&](int ip, int port) {
        const auto& ps = s.ports[static_cast<std::size_t>(port)];
        if (!ps.open) return 0;
        int room = cfg.exploit_rate + cfg.normal_req_max;  // effectively unbounded per step
        if (s.ips[static_cast<std::size_t>(ip)].rate_limited) {
            room = std::min(room, cfg.ip_rate_cap - ip_used[static_cast<std::size_t>(ip)]);
        }
        if (ps.rate_limited) {
            room = std::min(room, cfg.port_rate_cap - port_used[static_cast<std::size_t>(port)]);
        }
        return std::max(room, 0);
    };

    auto record = [&](int ip, int port, int n_attempted, int n_delivered) {
        const auto cell = static_cast<std::size_t>(ip) * n_ports + static_cast<std::size_t>(port);
        attempted[cell] += n_attempted;
        dropped[cell] += n_attempted - n_delivered;
        ip_used[static_cast<std::size_t>(ip)] += n_delivered;
        port_used[static_cast<std::size_t>(port)] += n_delivered;
        summary.generated[static_cast<std::size_t>(port)] += n_attempted;
        summary.delivered[static_cast<std::size_t>(port)] += n_delivered;
        summary.dropped[static_cast<std::size_t>(port)] += n_attempted - n_delivered;
    };

    auto& att = s.attacker;
    if (att.stream_target) {
        const int port = *att.stream_target;
        const int ip = att.current_ip();
        const int delivered = std::min(cfg.exploit_rate, capacity(ip, port));
        record(ip, port, cfg.exploit_rate, delivered);
        summary.exploit_attempted = cfg.exploit_rate;
        summary.exploit_delivered = delivered;

        if (!att.exploit_charged) out.events.push_back({EventKind::ExploitAttemptCost});

        auto& ps = s.ports[static_cast<std::size_t>(port)];
        if (delivered > 0 && ps.trapped) {
            out.events.push_back({EventKind::TrapHit});
            s.ips[static_cast<std::size_t>(ip)].blacklisted = true;
            att.stream_target.reset();
        } else if (delivered > 0) {
            att.counters[static_cast<std::size_t>(port)] += delivered;
            if (cfg.shaping && ps.vulnerable) {
                out.events.push_back({EventKind::ProgressDelta, static_cast<double>(delivered)});
            }
        }
    }

    std::vector<int> open_ports;
    for (int p = 0; p < cfg.n_ports; ++p) {
        if (s.ports[static_cast<std::size_t>(p)].open) open_ports.push_back(p);
    }
    const auto volume = s.rng.uniform_int(cfg.normal_req_min, cfg.normal_req_max);
    for (std::int64_t r = 0; r < volume; ++r) {
        const int ip = s.benign_ips[s.rng.below(s.benign_ips.size())];
        const int port = open_ports.empty()
                             ? static_cast<int>(s.rng.below(n_ports))
                             : open_ports[s.rng.below(open_ports.size())];
        const int delivered = capacity(ip, port) > 0 ? 1 : 0;
        record(ip, port, 1, delivered);
        ++summary.benign_generated;
        if (delivered == 0) {
            ++summary.benign_dropped;
            out.events.push_back({EventKind::BlockedBenignRequest});
        }
    }

    std::vector<Flow> flows;
    for (std::size_t ip = 0; ip < n_ips; ++ip) {
        for (std::size_t p = 0; p < n_ports; ++p) {
            const auto cell = ip * n_ports + p;
            if (attempted[cell] == 0) continue;
            flows.push_back(Flow{static_cast<int>(ip), static_cast<int>(p), attempted[cell],
                                 dropped[cell], s.ips[ip].kind == IpKind::Benign});
        }
    }
    s.history.push(std::move(flows));

    ++s.step;
    att.exploit_charged = false;
    s.turn = Turn::Attacker;
    out.traffic = std::move(summary);

    out.terminal = terminal_status(s);
    if (out.terminal.is_terminal()) {
        s.finished = true;
        out.events.push_back({out.terminal.kind == TerminalStatus::Kind::AttackerWin
                                  ? EventKind::SuccessfulExploit
                                  : EventKind::SuccessfulDefense});
    }
    return out;
}

TerminalStatus terminal_status(const EnvState& s) {
    const auto& att = s.attacker;
    if (att.stream_target) {
        const auto p = static_cast<std::size_t>(*att.stream_target);
        const auto& port = s.ports[p];
        if (port.open && port.vulnerable && att.counters[p] >= port.threshold) {
            return TerminalStatus::attacker_win();
        }
    }

    bool any_vulnerable = false;
    bool all_closed = true;
    for (const auto& port : s.ports) {
        if (!port.vulnerable) continue;
        any_vulnerable = true;
        all_closed = all_closed && !port.open;
    }
    if (any_vulnerable && all_closed) return TerminalStatus::defender_win(DefenseReason::AllVulnerableClosed);

    const bool exhausted =
        !att.reserved_ips.empty() &&
        std::all_of(att.reserved_ips.begin(), att.reserved_ips.end(),
                    [&](int ip) { return s.ips[static_cast<std::size_t>(ip)].blacklisted; });
    if (exhausted) return TerminalStatus::defender_win(DefenseReason::AttackerIpsExhausted);

    if (s.step >= s.config.max_steps) return TerminalStatus::defender_win(DefenseReason::SurvivedMaxSteps);
    return TerminalStatus::ongoing();
}

StepEvents step(EnvState& s, const AttackerAction& att, const DefenderAction& def) {
    StepEvents out = attacker_act(s, att);
    StepEvents d = defender_act(s, def);
    StepEvents t = advance_traffic(s);
    out.events.insert(out.events.end(), d.events.begin(), d.events.end());
    out.events.insert(out.events.end(), t.events.begin(), t.events.end());
    out.illegal = out.illegal || d.illegal;
    out.traffic = std::move(t.traffic);
    out.terminal = t.terminal;
    return out;
}

}  // namespace portwar
