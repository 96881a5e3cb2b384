#pragma once

#include <stdexcept>
#include <string>

namespace skillmatch {

/// Caller supplied something outside an operation's domain (bad index, bad
/// config, unreachable state, non-normalized probabilities).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A normalizing sum or geometric series does not converge (instability).
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal bookkeeping went inconsistent. Always a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace skillmatch
