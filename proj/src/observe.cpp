#include "portwar/observe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "portwar/errors.hpp"

namespace portwar {

namespace {

class LayoutBuilder {
public:
    LayoutBuilder& continuous(std::string name, std::size_t count) {
        return add(std::move(name), count, FeatureKind::Continuous, 0);
    }
    LayoutBuilder& categorical(std::string name, std::size_t count, int levels) {
        return add(std::move(name), count, FeatureKind::Categorical, levels);
    }
    ObsLayout build() { return std::move(layout_); }

private:
    LayoutBuilder& add(std::string name, std::size_t count, FeatureKind kind, int levels) {
        layout_.groups.push_back({std::move(name), offset_, count, kind, levels});
        offset_ += count;
        return *this;
    }
    ObsLayout layout_;
    std::size_t offset_ = 0;
};

double level(int k, int levels) { return static_cast<double>(k) / static_cast<double>(levels - 1); }

double ratio(double num, double den) {
    if (den <= 0.0) return 0.0;
    return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

std::size_t ObsLayout::size() const {
    return groups.empty() ? 0 : groups.back().offset + groups.back().count;
}

const FeatureGroup* ObsLayout::find(const std::string& name) const {
    for (const auto& g : groups) {
        if (g.name == name) return &g;
    }
    return nullptr;
}

nlohmann::json ObsLayout::to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& g : groups) {
        nlohmann::json j{{"name", g.name},
                         {"offset", g.offset},
                         {"count", g.count},
                         {"kind", g.kind == FeatureKind::Continuous ? "continuous" : "categorical"}};
        if (g.kind == FeatureKind::Categorical) j["levels"] = g.levels;
        out.push_back(std::move(j));
    }
    return out;
}

ObsLayout attacker_layout(const EnvConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    return LayoutBuilder{}
        .categorical("scan_result", n, 4)
        .continuous("exploit_progress", n)
        .categorical("ip_blacklisted", 1, 2)
        .continuous("ip_age", 1)
        .categorical("recent_outcomes", kRecentActions, 3)
        .build();
}

ObsLayout defender_layout(const EnvConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_ports);
    return LayoutBuilder{}
        .continuous("port_volume", n)
        .continuous("port_top_source_share", n)
        .categorical("port_rate_limited", n, 2)
        .categorical("port_trapped", n, 2)
        .categorical("port_closed", n, 2)
        .continuous("top_ip_volume", kTopIps)
        .continuous("benign_drop_fraction", 1)
        .build();
}

ObsVector attacker_observe(const EnvState& s) {
    const auto& cfg = s.config;
    const auto& att = s.attacker;
    ObsVector obs;
    obs.values.reserve(attacker_layout(cfg).size());

    for (auto code : att.scans) obs.values.push_back(level(static_cast<int>(code), 4));
    for (auto c : att.counters) obs.values.push_back(ratio(static_cast<double>(c), cfg.t_max));

    const bool blacklisted = s.ips[static_cast<std::size_t>(att.current_ip())].blacklisted;
    obs.values.push_back(blacklisted ? 1.0 : 0.0);

    const double age_scale = cfg.ip_change_min_actions > 0 ? cfg.ip_change_min_actions : 1;
    obs.values.push_back(ratio(att.actions_since_acquired, age_scale));

    for (std::size_t i = 0; i < kRecentActions; ++i) {
        const auto outcome = i < att.recent.size() ? att.recent[i] : ActionOutcome::None;
        obs.values.push_back(level(static_cast<int>(outcome), 3));
    }
    return obs;
}

ObsVector defender_observe(const EnvState& s) {
    const auto& cfg = s.config;
    const auto& h = s.history;
    const double window_scale = static_cast<double>(cfg.port_rate_cap) * cfg.history_window;

    ObsVector obs;
    obs.values.reserve(defender_layout(cfg).size());

    for (int p = 0; p < cfg.n_ports; ++p) {
        obs.values.push_back(ratio(static_cast<double>(h.port_requests(p)), window_scale));
    }
    for (int p = 0; p < cfg.n_ports; ++p) {
        long top = 0;
        for (int ip = 0; ip < cfg.n_ips; ++ip) top = std::max(top, h.port_ip_requests(p, ip));
        obs.values.push_back(ratio(static_cast<double>(top), static_cast<double>(h.port_requests(p))));
    }
    for (const auto& port : s.ports) obs.values.push_back(port.rate_limited ? 1.0 : 0.0);
    for (const auto& port : s.ports) obs.values.push_back(port.trapped ? 1.0 : 0.0);
    for (const auto& port : s.ports) obs.values.push_back(port.open ? 0.0 : 1.0);

    std::vector<int> ips(static_cast<std::size_t>(cfg.n_ips));
    std::iota(ips.begin(), ips.end(), 0);
    const auto top_n = std::min(kTopIps, ips.size());
    std::partial_sort(ips.begin(), ips.begin() + static_cast<std::ptrdiff_t>(top_n), ips.end(),
                      [&](int a, int b) {
                          const long va = h.ip_requests(a);
                          const long vb = h.ip_requests(b);
                          return va != vb ? va > vb : a < b;
                      });
    for (std::size_t i = 0; i < kTopIps; ++i) {
        const double v = i < top_n ? static_cast<double>(h.ip_requests(ips[i])) : 0.0;
        obs.values.push_back(ratio(v, window_scale));
    }

    obs.values.push_back(ratio(static_cast<double>(h.benign_dropped()),
                               static_cast<double>(h.benign_generated())));
    return obs;
}

void BinSpec::validate() const {
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        if (r.kind == FeatureKind::Continuous && !(r.lo < r.hi)) {
            throw ContractViolation("bin edges for feature " + std::to_string(i) +
                                    " are not strictly increasing");
        }
        if (r.kind == FeatureKind::Categorical && (r.levels < 2 || r.levels > 255)) {
            throw ContractViolation("categorical feature " + std::to_string(i) +
                                    " needs 2..255 levels");
        }
    }
}

BinSpec default_bins(const ObsLayout& layout) {
    BinSpec spec;
    spec.rules.reserve(layout.size());
    for (const auto& g : layout.groups) {
        BinRule rule;
        rule.kind = g.kind;
        if (g.kind == FeatureKind::Categorical) rule.levels = g.levels;
        spec.rules.insert(spec.rules.end(), g.count, rule);
    }
    return spec;
}

std::size_t DiscreteKeyHash::operator()(const DiscreteKey& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : key.bins) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

DiscreteKey discretize(const ObsVector& obs, const BinSpec& bins) {
    if (obs.size() != bins.rules.size()) {
        throw ContractViolation("discretize: observation has " + std::to_string(obs.size()) +
                                " features, bin spec has " + std::to_string(bins.rules.size()));
    }
    DiscreteKey key;
    key.bins.resize(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& r = bins.rules[i];
        const double v = obs[i];
        if (r.kind == FeatureKind::Categorical) {
            const double scaled = std::round(v * (r.levels - 1));
            key.bins[i] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, double(r.levels - 1)));
        } else {
            key.bins[i] = v < r.lo ? 0 : (v < r.hi ? 1 : 2);
        }
    }
    return key;
}

}  // namespace portwar
