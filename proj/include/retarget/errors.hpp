#pragma once

#include <stdexcept>
#include <string>

namespace retarget {

/// Invalid input documents and violated load-time invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A gain set outside the translation-gain threshold constraints.
class ConstraintError : public ValidationError {
 public:
  explicit ConstraintError(const std::string& what) : ValidationError(what) {}
};

}  // namespace retarget
