#pragma once

#include <stdexcept>
#include <string>

namespace nrcalc {

// Thrown when input is syntactically or semantically invalid (bad parameters,
// malformed graph files, inconsistent field choices). CLI maps this to exit 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a computation cannot certify its own answer: a truncated length
// failed to stabilize, a randomized search exhausted its retries, or an
// internal cross-check found a contradiction. CLI maps this to exit 3.
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nrcalc
