#include "portwar/agents/agent.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "portwar/agents/exploration.hpp"
#include "portwar/errors.hpp"

namespace portwar {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'W', 'C', 'K'};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    void le(std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }

    /// Size field with a sanity bound so corrupt files fail fast.
    std::size_t count(std::size_t limit, const char* what) {
        const auto n = u64();
        if (n > limit) throw CheckpointError(std::string("checkpoint: implausible ") + what);
        return static_cast<std::size_t>(n);
    }

private:
    std::uint64_t le(int bytes) {
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) throw CheckpointError("checkpoint: truncated file");
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
        }
        return v;
    }
    std::istream& in_;
};

void write_config(Writer& w, const AgentConfig& c) {
    w.f64(c.alpha);
    w.f64(c.gamma);
    w.f64(c.eps_initial);
    w.f64(c.eps_decay);
    w.f64(c.eps_min);
    w.i32(c.batch_size);
    w.i32(c.buffer_capacity);
    w.i32(c.target_sync_period);
    w.i32(c.hidden_width);
    w.u8(static_cast<std::uint8_t>(c.backend));
}

AgentConfig read_config(Reader& r) {
    AgentConfig c;
    c.alpha = r.f64();
    c.gamma = r.f64();
    c.eps_initial = r.f64();
    c.eps_decay = r.f64();
    c.eps_min = r.f64();
    c.batch_size = r.i32();
    c.buffer_capacity = r.i32();
    c.target_sync_period = r.i32();
    c.hidden_width = r.i32();
    const auto backend = r.u8();
    if (backend > static_cast<std::uint8_t>(Backend::Dqn)) throw CheckpointError("checkpoint: unknown backend");
    c.backend = static_cast<Backend>(backend);
    return c;
}

void write_mlp(Writer& w, const Mlp& net) {
    w.u64(net.sizes().size());
    for (int s : net.sizes()) w.i32(s);
    for (const auto& layer : net.layers()) {
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i) w.f64(layer.weights.data()[i]);
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) w.f64(layer.bias(i));
    }
}

Mlp read_mlp(Reader& r) {
    const auto depth = r.count(64, "layer count");
    std::vector<int> sizes;
    for (std::size_t i = 0; i < depth; ++i) {
        const int s = r.i32();
        if (s < 1 || s > (1 << 20)) throw CheckpointError("checkpoint: implausible layer width");
        sizes.push_back(s);
    }
    Mlp net(sizes);
    for (auto& layer : net.layers()) {
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = r.f64();
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = r.f64();
    }
    return net;
}

void write_header(Writer& w, const LearningAgent& agent) {
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u32(kCheckpointVersion);
    w.u8(static_cast<std::uint8_t>(agent.role()));
    write_config(w, agent.config());
    w.u64(agent.obs_size());
    w.u64(agent.action_count());
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::Attacker ? "attacker" : "defender"; }

std::size_t LearningAgent::choose(const DecisionContext& ctx, double eps, Rng& rng) {
    const auto q = q_values(ctx.obs);
    return select_action(q, eps, rng);
}

TabularAgent::TabularAgent(Role role, AgentConfig config, BinSpec bins, std::size_t action_count)
    : LearningAgent(role, config, bins.rules.size(), action_count),
      bins_(std::move(bins)),
      table_(action_count) {
    bins_.validate();
}

std::vector<double> TabularAgent::q_values(const ObsVector& obs) const {
    const auto row = table_.values(discretize(obs, bins_));
    return {row.begin(), row.end()};
}

void TabularAgent::learn(const Transition& tr) {
    qtable_update(table_, discretize(tr.s, bins_), tr.a, tr.r, discretize(tr.s_next, bins_),
                  tr.terminal, config_);
}

void TabularAgent::write(std::ostream& out) const {
    Writer w(out);
    write_header(w, *this);
    w.u64(bins_.rules.size());
    for (const auto& rule : bins_.rules) {
        w.u8(static_cast<std::uint8_t>(rule.kind));
        w.f64(rule.lo);
        w.f64(rule.hi);
        w.i32(rule.levels);
    }
    const auto rows = table_.sorted_rows();
    w.u64(rows.size());
    for (const auto& [key, values] : rows) {
        w.u64(key.bins.size());
        for (auto b : key.bins) w.u8(b);
        for (double v : values) w.f64(v);
    }
}

DqnAgent::DqnAgent(Role role, AgentConfig config, std::size_t obs_size, std::size_t action_count,
                   Rng& init_rng, std::uint64_t sample_seed)
    : LearningAgent(role, config, obs_size, action_count),
      online_(Mlp::random(dqn_layer_sizes(obs_size, action_count, config.hidden_width), init_rng)),
      target_(online_),
      replay_(static_cast<std::size_t>(config.buffer_capacity)),
      sample_rng_(sample_seed) {}

std::vector<double> DqnAgent::q_values(const ObsVector& obs) const {
    const Eigen::VectorXd q = mlp_forward(online_, obs);
    return {q.data(), q.data() + q.size()};
}

void DqnAgent::learn(const Transition& tr) {
    replay_.push(tr);
    ++env_steps_;
    if (auto batch = replay_.sample(static_cast<std::size_t>(config_.batch_size), sample_rng_)) {
        last_loss_ = dqn_train_step(online_, target_, *batch, config_);
        ++train_steps_;
    }
    if (env_steps_ % static_cast<std::uint64_t>(config_.target_sync_period) == 0) {
        sync_target(online_, target_);
    }
}

void DqnAgent::write(std::ostream& out) const {
    Writer w(out);
    write_header(w, *this);
    w.u64(env_steps_);
    w.u64(train_steps_);
    write_mlp(w, online_);
    write_mlp(w, target_);
}

std::unique_ptr<LearningAgent> make_agent(Role role, const AgentConfig& config, const EnvConfig& env,
                                          std::uint64_t seed) {
    const ObsLayout layout = role == Role::Attacker ? attacker_layout(env) : defender_layout(env);
    const std::size_t actions =
        role == Role::Attacker ? attacker_action_count(env) : defender_action_count(env);
    if (config.backend == Backend::Table) {
        return std::make_unique<TabularAgent>(role, config, default_bins(layout), actions);
    }
    Rng init(derive_seed(seed, 0));
    return std::make_unique<DqnAgent>(role, config, layout.size(), actions, init, derive_seed(seed, 1));
}

void write_agent(const LearningAgent& agent, std::ostream& out) { agent.write(out); }

std::unique_ptr<LearningAgent> read_agent(std::istream& in) {
    Reader r(in);
    for (char c : kMagic) {
        if (r.u8() != static_cast<std::uint8_t>(c)) throw CheckpointError("checkpoint: bad magic");
    }
    const auto version = r.u32();
    if (version != kCheckpointVersion) {
        throw CheckpointError("checkpoint: version " + std::to_string(version) + ", expected " +
                              std::to_string(kCheckpointVersion));
    }
    const auto role_byte = r.u8();
    if (role_byte > 1) throw CheckpointError("checkpoint: unknown role");
    const auto role = static_cast<Role>(role_byte);
    const AgentConfig config = read_config(r);
    try {
        config.validate("checkpoint");
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("checkpoint: invalid agent config, ") + e.what());
    }
    const auto obs_size = r.count(1 << 20, "observation size");
    const auto action_count = r.count(1 << 20, "action count");

    if (config.backend == Backend::Table) {
        BinSpec bins;
        const auto n_rules = r.count(1 << 20, "bin rule count");
        if (n_rules != obs_size) throw CheckpointError("checkpoint: bin spec does not match observation size");
        for (std::size_t i = 0; i < n_rules; ++i) {
            BinRule rule;
            const auto kind = r.u8();
            if (kind > 1) throw CheckpointError("checkpoint: unknown feature kind");
            rule.kind = static_cast<FeatureKind>(kind);
            rule.lo = r.f64();
            rule.hi = r.f64();
            rule.levels = r.i32();
            bins.rules.push_back(rule);
        }
        auto agent = std::make_unique<TabularAgent>(role, config, std::move(bins), action_count);
        const auto n_rows = r.count(std::size_t{1} << 40, "row count");
        for (std::size_t i = 0; i < n_rows; ++i) {
            DiscreteKey key;
            key.bins.resize(r.count(1 << 20, "key length"));
            for (auto& b : key.bins) b = r.u8();
            for (std::size_t a = 0; a < action_count; ++a) agent->table().set(key, a, r.f64());
        }
        return agent;
    }

    Rng unused(0);
    auto agent = std::make_unique<DqnAgent>(role, config, obs_size, action_count, unused, 0);
    agent->env_steps_ = r.u64();
    agent->train_steps_ = r.u64();
    agent->online_ = read_mlp(r);
    agent->target_ = read_mlp(r);
    if (agent->online_.input_size() != obs_size || agent->online_.output_size() != action_count ||
        agent->target_.sizes() != agent->online_.sizes()) {
        throw CheckpointError("checkpoint: network shape does not match header");
    }
    return agent;
}

void save_checkpoint(const LearningAgent& agent, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("checkpoint: cannot open " + path.string() + " for writing");
    write_agent(agent, out);
    out.flush();
    if (!out) throw CheckpointError("checkpoint: write failed for " + path.string());
}

std::unique_ptr<LearningAgent> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
    try {
        return read_agent(in);
    } catch (const CheckpointError& e) {
        throw CheckpointError(path.string() + ": " + e.what());
    }
}

}  // namespace portwar
