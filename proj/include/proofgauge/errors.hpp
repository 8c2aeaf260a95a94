#pragma once

#include <stdexcept>
#include <string>

namespace proofgauge {

// Bad input data, broken invariants, unusable configuration. Exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Examinee backend failures: spawn errors, timeouts, bad responses. Exit code 3.
struct BackendError : std::runtime_error {
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace proofgauge
