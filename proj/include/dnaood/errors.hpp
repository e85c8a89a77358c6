#pragma once

#include <stdexcept>
#include <string>

namespace dnaood {

// Malformed input: bad file formats, unknown taxa, inconsistent configs.
// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate but well-formed input: zero comparable sites, constant scores
// where variance is required, and so on. Maps to CLI exit code 2.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dnaood
