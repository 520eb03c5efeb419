// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nogo {

// Requested computation exceeds a configured resource cap (qubit count,
// dense POVM dimension, lambda-table size).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// No valid circuit parameters exist: n is below the minimum system count
// required for the given theta.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

// An iterative routine failed to reach its tolerance, or a computed value
// violates a numerical sanity bound.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace nogo
