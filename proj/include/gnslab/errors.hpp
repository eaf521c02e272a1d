#ifndef GNSLAB_ERRORS_HPP
#define GNSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "gnslab/types.hpp"

namespace gnslab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: shape mismatches, non-injective inclusions, bad tags.
struct StructuralError : Error {
  using Error::Error;
};

// Data violates a mathematical requirement (non-Hermitian, non-PSD, ...).
struct DataError : Error {
  using Error::Error;
};

// An operation was invoked on a functional that fails one of its standing
// hypotheses.  Carries the name of the failed condition and, when available,
// a witness vector that replays the failure.
struct PreconditionError : Error {
  std::string condition;
  Vec witness;
  PreconditionError(const std::string& cond, const std::string& msg)
      : Error(msg), condition(cond) {}
  PreconditionError(const std::string& cond, const std::string& msg, Vec w)
      : Error(msg), condition(cond), witness(std::move(w)) {}
};

// An internal invariant failed after construction; indicates a bug or a
// numerically hostile input, never a routine condition failure.
struct ConsistencyError : Error {
  using Error::Error;
};

// File / JSON / CLI argument problems.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace gnslab

#endif
