#pragma once

#include <stdexcept>
#include <string>

namespace hypervec {

// Configuration problems: bad keys, bad values, schema violations.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Input data problems: missing files, malformed lines, empty corpora.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative method failed to meet its tolerance within budget.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hypervec
