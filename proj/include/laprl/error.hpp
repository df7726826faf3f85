#pragma once

#include <stdexcept>
#include <string>

namespace laprl {

// Bad run configuration: unknown env name, unreachable goal, malformed map.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse: stepping a finished episode, shape mismatches, bad indices.
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& msg) : std::logic_error(msg) {}
};

// Numerical failure during learning (non-finite loss or gradients).
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace laprl
