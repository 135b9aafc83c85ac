// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "portwar/agents/exploration.hpp"
#include "portwar/metrics.hpp"
#include "portwar/trainer.hpp"

using namespace portwar;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kOracleTol = 1e-6;
constexpr double kGradTol = 1e-4;
constexpr int kGradNets = 10;
constexpr int kZeroSumRollouts = 1000;
constexpr int kTrapScans = 10'000;
constexpr double kTrapSigmas = 3.0;
constexpr int kTrainEpisodes = 2000;
constexpr int kTail = 100;
const std::vector<std::uint64_t> kSeeds{1, 2, 3};

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void epsilon_schedule() {
    bool exact = true;
    for (const auto& cfg : {attacker_defaults(), defender_defaults()}) {
        for (long t = 0; t <= 3000; ++t) {
            const double closed = std::max(cfg.eps_min, cfg.eps_initial * std::pow(cfg.eps_decay, double(t)));
            exact = exact && epsilon_at(cfg, t) == closed;
        }
    }
    const long att = epsilon_floor_episode(attacker_defaults());
    const long def = epsilon_floor_episode(defender_defaults());
    report(exact && att == 598 && def == 299, "epsilon-schedule",
           fmt("closed form exact=%s, floor episodes attacker=%ld defender=%ld (want 598, 299)",
               exact ? "yes" : "no", att, def));
}

void tabular_oracle() {
    const auto r = oracles::two_state_mdp();
    report(r.max_error < kOracleTol, "tabular-oracle", fmt("max |Q - Q*| = %.3g (tol %.0e)", r.max_error, kOracleTol));
}

void gradient_check() {
    const double worst = oracles::gradient_check(kGradNets, 2024);
    report(worst < kGradTol, "dqn-gradient-check",
           fmt("worst relative error over %d nets = %.3g (tol %.0e)", kGradNets, worst, kGradTol));
}

void zero_sum() {
    const EnvConfig cfg;
    Rng pick(77);
    long steps = 0, broken_sum = 0, broken_conservation = 0;
    for (int ep = 0; ep < kZeroSumRollouts; ++ep) {
        auto s = new_episode(cfg, derive_seed(0x2E50, static_cast<std::uint64_t>(ep)));
        RewardPair mirrored;
        while (!s.finished) {
            const auto ev = step(s, decode_attacker_action(cfg, pick.below(attacker_action_count(cfg))),
                                 decode_defender_action(cfg, pick.below(defender_action_count(cfg))));
            mirrored += score_mirrored(ev.events);
            const auto& t = *ev.traffic;
            int generated = 0;
            for (std::size_t p = 0; p < t.generated.size(); ++p) {
                generated += t.generated[p];
                if (t.generated[p] != t.delivered[p] + t.dropped[p]) ++broken_conservation;
            }
            if (generated != t.benign_generated + t.exploit_attempted) ++broken_conservation;
            ++steps;
        }
        if (mirrored.attacker + mirrored.defender != 0.0) ++broken_sum;
    }
    report(broken_sum == 0 && broken_conservation == 0, "zero-sum-suite",
           fmt("%d rollouts, %ld steps: nonzero mirrored sums=%ld, conservation breaks=%ld", kZeroSumRollouts,
               steps, broken_sum, broken_conservation));
}

void trap_statistics() {
    EnvConfig cfg;
    cfg.max_steps = kTrapScans + 10;
    auto s = new_episode(cfg, 31);
    int port = 0;
    while (!s.ports[static_cast<std::size_t>(port)].vulnerable) ++port;
    step(s, attacker::Scan{port}, defender::SetTrap{port});
    int hits = 0;
    for (int i = 0; i < kTrapScans; ++i) {
        hits += attacker_act(s, attacker::Scan{port}).scan->anomaly ? 1 : 0;
        defender_act(s, defender::Wait{});
        advance_traffic(s);
    }
    const double p = cfg.trap_detect_prob;
    const double freq = hits / double(kTrapScans);
    const double sigma = std::sqrt(p * (1 - p) / kTrapScans);
    report(std::abs(freq - p) <= kTrapSigmas * sigma, "trap-statistics",
           fmt("anomaly frequency %.4f over %d scans, target %.2f +/- %.4f", freq, kTrapScans, p,
               kTrapSigmas * sigma));
}

void mechanics_oracle() {
    const EnvConfig cfg;
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto s = new_episode(cfg, seed);
        int port = 0;
        while (!s.ports[static_cast<std::size_t>(port)].vulnerable) ++port;
        const int t_p = s.ports[static_cast<std::size_t>(port)].threshold;
        RewardPair mirrored;
        StepEvents ev;
        int steps = 0;
        while (!s.finished) {
            ev = step(s, attacker::Exploit{port}, defender::Wait{});
            mirrored += score_mirrored(ev.events);
            ++steps;
        }
        const int expected = (t_p + cfg.exploit_rate - 1) / cfg.exploit_rate;
        const bool ok = steps == expected && ev.terminal == TerminalStatus::attacker_win() &&
                        mirrored == RewardPair{100.0, -100.0};
        bad += ok ? 0 : 1;
    }
    report(bad == 0, "mechanics-oracle",
           fmt("200 scripted no-defense exploits, mismatches vs ceil(T_p/30) and (+100,-100): %d", bad));
}

struct RunResult {
    std::vector<EpisodeStats> episodes;
    double tail_attacker = 0, tail_defender = 0, tail_win_rate = 0, win_rate = 0;
};

RunResult run(const RunConfig& cfg) {
    RunResult r;
    r.episodes = train(cfg).episodes;
    std::vector<double> att, def;
    std::vector<bool> wins;
    for (const auto& e : r.episodes) {
        att.push_back(e.attacker_reward);
        def.push_back(e.defender_reward);
        wins.push_back(e.attacker_won());
        r.win_rate += e.attacker_won() ? 1.0 : 0.0;
    }
    r.win_rate /= static_cast<double>(r.episodes.size());
    r.tail_attacker = tail_mean(att, kTail);
    r.tail_defender = tail_mean(def, kTail);
    r.tail_win_rate = trailing_rate(wins, kTail).back();
    return r;
}

RunConfig base_run(std::uint64_t seed) {
    RunConfig cfg;
    cfg.train.episodes = kTrainEpisodes;
    cfg.seed = seed;
    return cfg;
}

void dominance_and_ablation() {
    bool dominant = true;
    std::string detail;
    double wins_default = 0, wins_no_trap = 0;
    std::string ablation_detail;
    for (auto seed : kSeeds) {
        const auto d = run(base_run(seed));
        const bool ok = d.tail_defender > d.tail_attacker && d.tail_win_rate < 0.5;
        dominant = dominant && ok;
        detail += fmt("[seed %llu: def %.1f att %.1f win %.2f] ", static_cast<unsigned long long>(seed),
                      d.tail_defender, d.tail_attacker, d.tail_win_rate);

        auto cfg = base_run(seed);
        cfg.env.trap_detect_prob = 0.0;
        const auto z = run(cfg);
        wins_default += d.win_rate;
        wins_no_trap += z.win_rate;
        ablation_detail += fmt("[seed %llu: %.3f vs %.3f] ", static_cast<unsigned long long>(seed), z.win_rate,
                               d.win_rate);
    }
    report(dominant, "defender-dominance", "last-100 means and attacker win rate " + detail);
    wins_default /= static_cast<double>(kSeeds.size());
    wins_no_trap /= static_cast<double>(kSeeds.size());
    report(wins_no_trap > wins_default, "ablation-direction",
           fmt("attacker win rate P_trap=0.0: %.4f vs P_trap=0.6: %.4f ", wins_no_trap, wins_default) +
               ablation_detail);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void reproducibility() {
    const fs::path root = fs::temp_directory_path() / "portwar_acceptance_repro";
    fs::remove_all(root);
    auto a = base_run(1);
    auto b = a;
    a.output_dir = root / "a";
    b.output_dir = root / "b";
    train(a);
    train(b);
    bool same = true;
    std::string detail;
    for (const char* f : {"episodes.csv", "summary.json", "config.json"}) {
        const bool eq = slurp(a.output_dir / f) == slurp(b.output_dir / f) && !slurp(a.output_dir / f).empty();
        same = same && eq;
        detail += std::string(f) + (eq ? " identical; " : " DIFFERS; ");
    }
    fs::remove_all(root);
    report(same, "reproducibility", detail);
}

}  // namespace

int main() {
    epsilon_schedule();
    tabular_oracle();
    gradient_check();
    zero_sum();
    trap_statistics();
    mechanics_oracle();
    dominance_and_ablation();
    reproducibility();
    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
