#pragma once

#include <stdexcept>
#include <string>

namespace portwar {

/// Invalid configuration value; carries the dotted key path that failed.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Caller broke a documented precondition (out-of-range index, wrong turn, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A learner produced a non-finite loss or parameters.
class TrainingDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checkpoint file is missing, truncated, or written by another format version.
class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run's metrics file is missing or unreadable; names the file.
class MetricsFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure during a training run; records how far the run got.
class RunIoError : public std::runtime_error {
public:
    RunIoError(long episode, const std::string& what)
        : std::runtime_error("after episode " + std::to_string(episode) + ": " + what),
          episode_(episode) {}

    long episode() const noexcept { return episode_; }

private:
    long episode_;
};

}  // namespace portwar
