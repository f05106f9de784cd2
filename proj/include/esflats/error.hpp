#pragma once

#include <stdexcept>
#include <string>

namespace esflats {

/// Malformed or inconsistent input, such as mismatched dimensions or an unreadable file.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a general-position requirement.
class GeneralPositionError : public InputError {
 public:
  using InputError::InputError;
};

/// A configured resource cap was exceeded (net size or LP pivot count, for example).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded search ended without finding what it looked for. This is not a disproof.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal construction produced data that failed its own exact re-check.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace esflats
