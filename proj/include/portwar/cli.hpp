#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "portwar/run_config.hpp"
#include "portwar/trainer.hpp"

namespace portwar {

/// Environment variable naming the default parent directory for run output.
inline constexpr const char* kOutputRootEnv = "PORTWAR_OUTPUT_ROOT";

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// $PORTWAR_OUTPUT_ROOT, or "runs" when unset.
std::filesystem::path default_output_root();

/// One row of episodes.csv.
struct EpisodeRow {
    long episode = 0;
    double attacker_reward = 0.0;
    double defender_reward = 0.0;
    TerminalStatus outcome;
    int steps = 0;
    double attacker_eps = 0.0;
    double defender_eps = 0.0;
};

/// Parses episodes.csv; MetricsFileError names the file and line on failure.
std::vector<EpisodeRow> read_episodes_csv(const std::filesystem::path& path);

/// Writes <run_dir>/plot_data.csv with raw and 50-episode averaged rewards per
/// side and the trailing-100 attacker win rate. Returns the written path.
std::filesystem::path plot_export(const std::filesystem::path& run_dir);

/// One grid axis: a dotted config key and the values it takes.
using GridAxis = std::pair<std::string, std::vector<std::string>>;

/// Parses "key=v1,v2,...".
GridAxis parse_grid_axis(const std::string& text);

struct SweepCell {
    std::vector<std::string> overrides;
    std::filesystem::path run_dir;
    bool ok = false;
    std::string error;
    double attacker_win_rate = 0.0;
    double last100_attacker = 0.0;
    double last100_defender = 0.0;
};

/// Trains every cell of the Cartesian grid in order, each in its own
/// <root>/cell-<i> directory. A failing cell is recorded and the rest still
/// run. An empty grid runs nothing.
std::vector<SweepCell> sweep(const std::vector<std::string>& base_overrides,
                             const std::optional<std::filesystem::path>& config_file,
                             const std::vector<GridAxis>& grid, const std::filesystem::path& root);

/// Comparison table, one row per cell.
std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace portwar
