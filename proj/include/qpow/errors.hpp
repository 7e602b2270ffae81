#pragma once

#include <stdexcept>
#include <string>

namespace qpow {

// Walker population reached zero; the trajectory cannot continue.
class PopulationCollapse : public std::runtime_error {
 public:
  explicit PopulationCollapse(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration, matrix file, or inconsistent option set.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The exact method finished its iteration budget without meeting the
// convergence test.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpow
