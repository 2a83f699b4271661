#pragma once

#include <stdexcept>
#include <string>

namespace psel {

// Base for all domain failures (maps to CLI exit code 1).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires the other instance backing (likelihood vs partition).
struct BackingError : Error {
  using Error::Error;
};

// Constraint system cannot be satisfied even with every source selected.
struct InfeasibleError : Error {
  using Error::Error;
};

// Instance too large for an exhaustive-enumeration operation.
struct SizeError : Error {
  using Error::Error;
};

// Unreadable/unparseable input (maps to CLI exit code 2).
struct InputError : Error {
  using Error::Error;
};

}  // namespace psel
