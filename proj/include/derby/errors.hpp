#pragma once

#include <stdexcept>
#include <string>

namespace derby {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Violation of the game rules or of an operation's precondition
/// (illegal move, querying an unfinished tournament, ...).
struct RulesError : Error {
  using Error::Error;
};

/// Invalid run configuration: bad parameter ranges, duplicate agent names,
/// missing API key environment variables, unwritable output directory.
struct ConfigError : Error {
  using Error::Error;
};

/// A remote request failed after all retries were exhausted.
struct TransportError : Error {
  TransportError(const std::string& message, int attempts_made)
      : Error(message), attempts(attempts_made) {}
  int attempts = 0;
};

/// Standard input closed while an interactive player was being prompted.
struct EndOfInputError : Error {
  using Error::Error;
};

}  // namespace derby
