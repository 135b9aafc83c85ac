#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "portwar/env.hpp"

namespace portwar {

enum class FeatureKind : std::uint8_t { Continuous, Categorical };

/// A named, contiguous run of features inside an observation vector.
/// Categorical features encode level k of `levels` as k / (levels - 1).
struct FeatureGroup {
    std::string name;
    std::size_t offset = 0;
    std::size_t count = 0;
    FeatureKind kind = FeatureKind::Continuous;
    int levels = 0;

    bool operator==(const FeatureGroup&) const = default;
};

struct ObsLayout {
    std::vector<FeatureGroup> groups;

    std::size_t size() const;
    const FeatureGroup* find(const std::string& name) const;
    nlohmann::json to_json() const;
    bool operator==(const ObsLayout&) const = default;
};

struct ObsVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const ObsVector&) const = default;
};

ObsLayout attacker_layout(const EnvConfig& cfg);
ObsLayout defender_layout(const EnvConfig& cfg);

ObsVector attacker_observe(const EnvState& state);
ObsVector defender_observe(const EnvState& state);

/// Number of top-volume IPs in the defender view.
inline constexpr std::size_t kTopIps = 3;

/// Per-feature binning rule. Continuous: value < lo -> 0, < hi -> 1, else 2.
/// Categorical: passes the level index through.
struct BinRule {
    FeatureKind kind = FeatureKind::Continuous;
    double lo = 1.0 / 3.0;
    double hi = 2.0 / 3.0;
    int levels = 3;

    bool operator==(const BinRule&) const = default;
};

struct BinSpec {
    std::vector<BinRule> rules;

    /// Throws ContractViolation when a continuous rule has lo >= hi.
    void validate() const;
    bool operator==(const BinSpec&) const = default;
};

/// Edges (1/3, 2/3) for every continuous feature; categorical groups pass through.
BinSpec default_bins(const ObsLayout& layout);

struct DiscreteKey {
    std::vector<std::uint8_t> bins;

    bool operator==(const DiscreteKey&) const = default;
    auto operator<=>(const DiscreteKey&) const = default;
};

struct DiscreteKeyHash {
    std::size_t operator()(const DiscreteKey& key) const noexcept;
};

DiscreteKey discretize(const ObsVector& obs, const BinSpec& bins);

}  // namespace portwar
