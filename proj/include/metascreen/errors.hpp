#pragma once

#include <stdexcept>
#include <string>

namespace metascreen {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError -> 2, DomainError/RegimeError -> 3, ConvergenceError -> 4.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid evaluator input: singular displacement, argument outside the
// kernel's domain, on-lattice source point.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Physically excluded configuration: Wood anomaly, at or above the first
// diffraction order.
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace metascreen
