#include "portwar/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "portwar/errors.hpp"
#include "portwar/metrics.hpp"

namespace portwar {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::string out;

    std::optional<fs::path> config_path() const {
        if (config.empty()) return std::nullopt;
        return fs::path(config);
    }

    std::vector<std::string> all_overrides() const {
        auto all = overrides;
        if (seed) all.push_back("seed=" + std::to_string(*seed));
        return all;
    }
};

void add_common(CLI::App& cmd, CommonArgs& args, bool with_out = true) {
    cmd.add_option("--config", args.config, "JSON config file");
    cmd.add_option("--set", args.overrides, "Override as dotted.key=value (repeatable)");
    cmd.add_option("--seed", args.seed, "Run seed");
    if (with_out) cmd.add_option("--out", args.out, "Output directory");
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed for " + path.string());
}

/// Latest checkpoints/<side>-<episode> in a run directory.
fs::path latest_checkpoint(const fs::path& run_dir, Role role) {
    const fs::path dir = run_dir / "checkpoints";
    const std::string prefix = std::string(to_string(role)) + "-";
    long best = -1;
    fs::path found;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) != 0) continue;
        long episode = 0;
        const char* first = name.data() + prefix.size();
        const char* last = name.data() + name.size();
        auto [ptr, err] = std::from_chars(first, last, episode);
        if (err != std::errc{} || ptr != last) continue;
        if (episode > best) {
            best = episode;
            found = entry.path();
        }
    }
    if (best < 0) throw CheckpointError("no " + std::string(to_string(role)) + " checkpoint under " + dir.string());
    return found;
}

int cmd_validate(const CommonArgs& args, std::ostream& out) {
    const RunConfig cfg = resolve_config(args.config_path(), args.all_overrides());
    out << to_json(cfg).dump(2) << "\n";
    return kExitOk;
}

int cmd_train(const CommonArgs& args, std::ostream& out) {
    RunConfig cfg = resolve_config(args.config_path(), args.all_overrides());
    out << to_json(cfg).dump(2) << "\n";
    cfg.output_dir = args.out.empty()
                         ? default_output_root() / ("train-" + config_hash(cfg))
                         : fs::path(args.out);
    const TrainingLog log = train(cfg);
    out << training_summary(log).dump(2) << "\n";
    out << "wrote " << cfg.output_dir.string() << "\n";
    return kExitOk;
}

int cmd_eval(const CommonArgs& args, const std::string& run, const std::string& att_path,
             const std::string& def_path, std::ostream& out) {
    auto config_file = args.config_path();
    if (!config_file && !run.empty()) config_file = fs::path(run) / "config.json";
    const RunConfig cfg = resolve_config(config_file, args.all_overrides());
    out << to_json(cfg).dump(2) << "\n";

    fs::path att = att_path, def = def_path;
    if (att.empty() || def.empty()) {
        if (run.empty()) throw ConfigError("--run", "give --run or both --attacker and --defender");
        if (att.empty()) att = latest_checkpoint(run, Role::Attacker);
        if (def.empty()) def = latest_checkpoint(run, Role::Defender);
    }
    const EvalReport report =
        evaluate_checkpoints(att, def, cfg.env, cfg.reward, cfg.eval.episodes, cfg.eval.epsilon, cfg.seed);
    const std::string text = report.to_json().dump(2) + "\n";
    out << text;

    fs::path dest = !args.out.empty() ? fs::path(args.out) : (run.empty() ? fs::path() : fs::path(run));
    if (!dest.empty()) {
        fs::create_directories(dest);
        write_file(dest / "eval.json", text);
    }
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::vector<std::string>& grid_text, std::ostream& out) {
    // Validate the base config before any cell runs.
    const RunConfig base = resolve_config(args.config_path(), args.all_overrides());
    out << to_json(base).dump(2) << "\n";

    std::vector<GridAxis> grid;
    for (const auto& g : grid_text) grid.push_back(parse_grid_axis(g));

    const fs::path root = args.out.empty() ? default_output_root() / ("sweep-" + config_hash(base))
                                           : fs::path(args.out);
    const auto cells = sweep(args.all_overrides(), args.config_path(), grid, root);
    const std::string table = sweep_csv(cells);
    fs::create_directories(root);
    write_file(root / "sweep.csv", table);
    out << table;

    for (const auto& c : cells) {
        if (!c.ok) return kExitRuntime;
    }
    return kExitOk;
}

int cmd_plot(const std::string& run, std::ostream& out) {
    const fs::path written = plot_export(run);
    out << "wrote " << written.string() << "\n";
    return kExitOk;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

template <class T>
bool parse_number(const std::string& text, T& value) {
    const char* last = text.data() + text.size();
    auto [ptr, err] = std::from_chars(text.data(), last, value);
    return err == std::errc{} && ptr == last;
}

}  // namespace

fs::path default_output_root() {
    const char* root = std::getenv(kOutputRootEnv);
    return (root && *root) ? fs::path(root) : fs::path("runs");
}

std::vector<EpisodeRow> read_episodes_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw MetricsFileError("missing metrics file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kEpisodesHeader) {
        throw MetricsFileError("corrupt metrics file " + path.string() + ": bad header");
    }
    std::vector<EpisodeRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        EpisodeRow r;
        std::optional<TerminalStatus> outcome;
        const bool good = f.size() == 7 && parse_number(f[0], r.episode) &&
                          parse_number(f[1], r.attacker_reward) && parse_number(f[2], r.defender_reward) &&
                          (outcome = terminal_status_from_string(f[3])).has_value() &&
                          parse_number(f[4], r.steps) && parse_number(f[5], r.attacker_eps) &&
                          parse_number(f[6], r.defender_eps);
        if (!good) {
            throw MetricsFileError("corrupt metrics file " + path.string() + ": line " + std::to_string(lineno));
        }
        r.outcome = *outcome;
        rows.push_back(r);
    }
    return rows;
}

fs::path plot_export(const fs::path& run_dir) {
    const auto rows = read_episodes_csv(run_dir / "episodes.csv");
    std::vector<double> att, def;
    std::vector<bool> wins;
    for (const auto& r : rows) {
        att.push_back(r.attacker_reward);
        def.push_back(r.defender_reward);
        wins.push_back(r.outcome.kind == TerminalStatus::Kind::AttackerWin);
    }
    const auto att_ma = moving_average(att, 50);
    const auto def_ma = moving_average(def, 50);
    const auto rate = trailing_rate(wins, 100);

    std::string text = "episode,att_reward,def_reward,att_ma50,def_ma50,att_win_rate100\n";
    char buf[256];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%ld,%.6f,%.6f,%.6f,%.6f,%.6f\n", rows[i].episode, att[i], def[i],
                      att_ma[i], def_ma[i], rate[i]);
        text += buf;
    }
    const fs::path dest = run_dir / "plot_data.csv";
    write_file(dest, text);
    return dest;
}

GridAxis parse_grid_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw ConfigError(text, "grid axis must look like dotted.key=v1,v2");
    }
    return {text.substr(0, eq), split(text.substr(eq + 1), ',')};
}

std::vector<SweepCell> sweep(const std::vector<std::string>& base_overrides,
                             const std::optional<fs::path>& config_file, const std::vector<GridAxis>& grid,
                             const fs::path& root) {
    std::vector<SweepCell> cells;
    if (grid.empty()) return cells;

    std::vector<std::size_t> idx(grid.size(), 0);
    for (const auto& axis : grid) {
        if (axis.second.empty()) return cells;
    }
    while (true) {
        SweepCell cell;
        for (std::size_t a = 0; a < grid.size(); ++a) {
            cell.overrides.push_back(grid[a].first + "=" + grid[a].second[idx[a]]);
        }
        cell.run_dir = root / ("cell-" + std::to_string(cells.size()));
        try {
            auto overrides = base_overrides;
            overrides.insert(overrides.end(), cell.overrides.begin(), cell.overrides.end());
            RunConfig cfg = resolve_config(config_file, overrides);
            cfg.output_dir = cell.run_dir;
            const auto summary = training_summary(train(cfg));
            cell.attacker_win_rate = summary.at("attacker_win_rate").get<double>();
            cell.last100_attacker = summary.at("last100_mean_attacker").get<double>();
            cell.last100_defender = summary.at("last100_mean_defender").get<double>();
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        cells.push_back(std::move(cell));

        std::size_t a = grid.size();
        while (a > 0) {
            --a;
            if (++idx[a] < grid[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return cells;
        }
    }
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string text = "cell,overrides,status,attacker_win_rate,last100_attacker,last100_defender,error\n";
    char buf[128];
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        std::string joined;
        for (const auto& o : c.overrides) joined += (joined.empty() ? "" : ";") + o;
        std::string error = c.error;
        for (char& ch : error) {
            if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        }
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", c.attacker_win_rate, c.last100_attacker,
                      c.last100_defender);
        text += std::to_string(i) + "," + joined + "," + (c.ok ? "ok" : "failed") + "," + buf + "," + error + "\n";
    }
    return text;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Attacker/defender port-exploitation game: training and evaluation"};
    app.require_subcommand(1);

    CommonArgs train_args, eval_args, sweep_args, validate_args;
    std::string eval_run, eval_att, eval_def, plot_run;
    std::vector<std::string> grid;

    auto* train_cmd = app.add_subcommand("train", "Train both agents");
    add_common(*train_cmd, train_args);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate saved checkpoints with learning off");
    add_common(*eval_cmd, eval_args);
    eval_cmd->add_option("--run", eval_run, "Run directory; uses its config and latest checkpoints");
    eval_cmd->add_option("--attacker", eval_att, "Attacker checkpoint");
    eval_cmd->add_option("--defender", eval_def, "Defender checkpoint");

    auto* sweep_cmd = app.add_subcommand("sweep", "Train every cell of a config grid");
    add_common(*sweep_cmd, sweep_args);
    sweep_cmd->add_option("--grid", grid, "Axis as dotted.key=v1,v2 (repeatable)");

    auto* plot_cmd = app.add_subcommand("plot", "Export plot data from a run directory");
    plot_cmd->add_option("run", plot_run, "Run directory")->required();

    auto* validate_cmd = app.add_subcommand("validate-config", "Resolve and check a config, then exit");
    add_common(*validate_cmd, validate_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*train_cmd) return cmd_train(train_args, out);
        if (*eval_cmd) return cmd_eval(eval_args, eval_run, eval_att, eval_def, out);
        if (*sweep_cmd) return cmd_sweep(sweep_args, grid, out);
        if (*plot_cmd) return cmd_plot(plot_run, out);
        return cmd_validate(validate_args, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace portwar
