#pragma once

#include <stdexcept>
#include <string>

namespace mfnipr {

// Instance or plan data violates a structural invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or search exceeded its configured cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// The simplex engine lost numerical footing (tiny pivots persist).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mfnipr
