#include "portwar/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "portwar/errors.hpp"

namespace portwar {

using nlohmann::json;

namespace {

const char* type_label(const json& j) {
    if (j.is_boolean()) return "boolean";
    if (j.is_number_integer()) return "integer";
    if (j.is_number()) return "number";
    if (j.is_string()) return "string";
    if (j.is_object()) return "object";
    return j.type_name();
}

bool compatible(const json& schema, const json& value) {
    if (schema.is_boolean()) return value.is_boolean();
    if (schema.is_number_integer()) return value.is_number_integer();
    if (schema.is_number()) return value.is_number();
    if (schema.is_string()) return value.is_string();
    if (schema.is_object()) return value.is_object();
    return false;
}

/// Recursively overlays `src` onto `dst`, which holds the defaults and acts as
/// the schema.
void merge_checked(json& dst, const json& src, const std::string& path) {
    if (!src.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!dst.contains(it.key())) throw ConfigError(key, "unknown key");
        json& slot = dst[it.key()];
        if (slot.is_object()) {
            merge_checked(slot, it.value(), key);
            continue;
        }
        if (!compatible(slot, it.value())) {
            throw ConfigError(key, std::string("expected ") + type_label(slot) + ", got " +
                                       type_label(it.value()));
        }
        slot = it.value();
    }
}

json env_json(const EnvConfig& e) {
    return {{"n_ports", e.n_ports},
            {"vulnerable_min", e.vulnerable_min},
            {"vulnerable_max", e.vulnerable_max},
            {"t_min", e.t_min},
            {"t_max", e.t_max},
            {"n_ips", e.n_ips},
            {"attacker_ip_count", e.attacker_ip_count},
            {"normal_req_min", e.normal_req_min},
            {"normal_req_max", e.normal_req_max},
            {"trap_detect_prob", e.trap_detect_prob},
            {"exploit_rate", e.exploit_rate},
            {"ip_change_min_actions", e.ip_change_min_actions},
            {"ip_rate_cap", e.ip_rate_cap},
            {"port_rate_cap", e.port_rate_cap},
            {"max_steps", e.max_steps},
            {"history_window", e.history_window},
            {"shaping", e.shaping}};
}

json reward_json(const RewardTable& r) {
    return {{"successful_exploit", r.successful_exploit},
            {"trap_hit", r.trap_hit},
            {"successful_defense", r.successful_defense},
            {"scan_cost", r.scan_cost},
            {"exploit_attempt", r.exploit_attempt},
            {"cancel", r.cancel},
            {"change_ip", r.change_ip},
            {"rate_limit_ip", r.rate_limit_ip},
            {"rate_limit_port", r.rate_limit_port},
            {"close_port", r.close_port},
            {"trap_set", r.trap_set},
            {"blocked_benign", r.blocked_benign},
            {"shaping_coef", r.shaping_coef}};
}

json agent_json(const AgentConfig& a) {
    return {{"alpha", a.alpha},
            {"gamma", a.gamma},
            {"eps_initial", a.eps_initial},
            {"eps_decay", a.eps_decay},
            {"eps_min", a.eps_min},
            {"batch_size", a.batch_size},
            {"buffer_capacity", a.buffer_capacity},
            {"target_sync_period", a.target_sync_period},
            {"hidden_width", a.hidden_width},
            {"backend", std::string(to_string(a.backend))}};
}

AgentConfig agent_from(const json& j, const std::string& prefix) {
    AgentConfig a;
    a.alpha = j.at("alpha").get<double>();
    a.gamma = j.at("gamma").get<double>();
    a.eps_initial = j.at("eps_initial").get<double>();
    a.eps_decay = j.at("eps_decay").get<double>();
    a.eps_min = j.at("eps_min").get<double>();
    a.batch_size = j.at("batch_size").get<int>();
    a.buffer_capacity = j.at("buffer_capacity").get<int>();
    a.target_sync_period = j.at("target_sync_period").get<int>();
    a.hidden_width = j.at("hidden_width").get<int>();
    const auto name = j.at("backend").get<std::string>();
    const auto backend = backend_from_string(name);
    if (!backend) throw ConfigError(prefix + ".backend", "expected \"table\" or \"dqn\", got \"" + name + "\"");
    a.backend = *backend;
    return a;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void RunConfig::validate() const {
    env.validate();
    reward.validate();
    attacker.validate("attacker");
    defender.validate("defender");
    if (train.episodes < 0) throw ConfigError("train.episodes", "must be >= 0");
    if (train.checkpoint_every < 0) throw ConfigError("train.checkpoint_every", "must be >= 0");
    if (train.alternate_every < 0) throw ConfigError("train.alternate_every", "must be >= 0");
    if (eval.episodes < 1) throw ConfigError("eval.episodes", "must be >= 1");
    if (!(eval.epsilon >= 0.0 && eval.epsilon <= 1.0)) throw ConfigError("eval.epsilon", "must lie in [0, 1]");
}

json to_json(const RunConfig& c) {
    return {{"env", env_json(c.env)},
            {"reward", reward_json(c.reward)},
            {"attacker", agent_json(c.attacker)},
            {"defender", agent_json(c.defender)},
            {"train",
             {{"episodes", c.train.episodes},
              {"checkpoint_every", c.train.checkpoint_every},
              {"attacker_learns", c.train.attacker_learns},
              {"defender_learns", c.train.defender_learns},
              {"alternate_every", c.train.alternate_every}}},
            {"eval", {{"episodes", c.eval.episodes}, {"epsilon", c.eval.epsilon}}},
            {"seed", c.seed}};
}

RunConfig run_config_from_json(const json& j) {
    json doc = to_json(RunConfig{});
    merge_checked(doc, j, "");
    if (doc.at("seed").is_number_integer() && doc.at("seed").get<std::int64_t>() < 0 &&
        !doc.at("seed").is_number_unsigned()) {
        throw ConfigError("seed", "must be >= 0");
    }

    RunConfig c;
    const auto& e = doc.at("env");
    c.env.n_ports = e.at("n_ports").get<int>();
    c.env.vulnerable_min = e.at("vulnerable_min").get<int>();
    c.env.vulnerable_max = e.at("vulnerable_max").get<int>();
    c.env.t_min = e.at("t_min").get<int>();
    c.env.t_max = e.at("t_max").get<int>();
    c.env.n_ips = e.at("n_ips").get<int>();
    c.env.attacker_ip_count = e.at("attacker_ip_count").get<int>();
    c.env.normal_req_min = e.at("normal_req_min").get<int>();
    c.env.normal_req_max = e.at("normal_req_max").get<int>();
    c.env.trap_detect_prob = e.at("trap_detect_prob").get<double>();
    c.env.exploit_rate = e.at("exploit_rate").get<int>();
    c.env.ip_change_min_actions = e.at("ip_change_min_actions").get<int>();
    c.env.ip_rate_cap = e.at("ip_rate_cap").get<int>();
    c.env.port_rate_cap = e.at("port_rate_cap").get<int>();
    c.env.max_steps = e.at("max_steps").get<int>();
    c.env.history_window = e.at("history_window").get<int>();
    c.env.shaping = e.at("shaping").get<bool>();

    const auto& r = doc.at("reward");
    c.reward.successful_exploit = r.at("successful_exploit").get<double>();
    c.reward.trap_hit = r.at("trap_hit").get<double>();
    c.reward.successful_defense = r.at("successful_defense").get<double>();
    c.reward.scan_cost = r.at("scan_cost").get<double>();
    c.reward.exploit_attempt = r.at("exploit_attempt").get<double>();
    c.reward.cancel = r.at("cancel").get<double>();
    c.reward.change_ip = r.at("change_ip").get<double>();
    c.reward.rate_limit_ip = r.at("rate_limit_ip").get<double>();
    c.reward.rate_limit_port = r.at("rate_limit_port").get<double>();
    c.reward.close_port = r.at("close_port").get<double>();
    c.reward.trap_set = r.at("trap_set").get<double>();
    c.reward.blocked_benign = r.at("blocked_benign").get<double>();
    c.reward.shaping_coef = r.at("shaping_coef").get<double>();

    c.attacker = agent_from(doc.at("attacker"), "attacker");
    c.defender = agent_from(doc.at("defender"), "defender");

    const auto& t = doc.at("train");
    c.train.episodes = t.at("episodes").get<int>();
    c.train.checkpoint_every = t.at("checkpoint_every").get<int>();
    c.train.attacker_learns = t.at("attacker_learns").get<bool>();
    c.train.defender_learns = t.at("defender_learns").get<bool>();
    c.train.alternate_every = t.at("alternate_every").get<int>();

    c.eval.episodes = doc.at("eval").at("episodes").get<int>();
    c.eval.epsilon = doc.at("eval").at("epsilon").get<double>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    return c;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must look like dotted.key=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(part)) throw ConfigError(path, "unknown key");
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (node->is_object()) throw ConfigError(path, "cannot override a whole section");

    json value;
    if (node->is_boolean() && (raw == "on" || raw == "off")) {
        value = (raw == "on");
    } else {
        value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
        if (value.is_discarded()) value = raw;
    }
    if (!compatible(*node, value)) {
        throw ConfigError(path, std::string("expected ") + type_label(*node) + ", got " + type_label(value));
    }
    *node = std::move(value);
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::string>& overrides) {
    json doc = to_json(RunConfig{});
    if (file) {
        const json parsed = json::parse(read_file(*file), nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded()) throw ConfigError("<file>", file->string() + " is not valid JSON");
        merge_checked(doc, parsed, "");
    }
    for (const auto& o : overrides) apply_override(doc, o);
    RunConfig config = run_config_from_json(doc);
    config.validate();
    return config;
}

std::string config_hash(const RunConfig& config) {
    const std::string canonical = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace portwar
