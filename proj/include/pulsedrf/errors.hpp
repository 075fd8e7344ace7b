#pragma once
#include <stdexcept>
#include <string>

namespace prf {

// Rejected inputs: bad config values, unsupported shapes, schema violations.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Propagation or state-validity failures (diverged norms, negativity, NaN).
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures while reading configs or writing outputs.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prf
