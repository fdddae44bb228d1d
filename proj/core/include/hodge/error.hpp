#pragma once

#include <stdexcept>
#include <string>

namespace hodge {

// Base class for all library errors.  The CLI maps these onto exit codes:
// InvalidInput -> 2, NumericalUnderflow -> 3, everything else that escapes
// a command handler -> 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (parse failures, violated
// preconditions, broken document invariants).
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Mixing scalars of different field tags without an explicit promotion.
struct FieldMismatch : InvalidInput {
  explicit FieldMismatch(const std::string& what) : InvalidInput(what) {}
};

// Shape disagreement between matrix/vector operands.
struct DimensionMismatch : InvalidInput {
  explicit DimensionMismatch(const std::string& what) : InvalidInput(what) {}
};

// A float computation left the representable/resolvable range (series
// truncation bounds, distance underflow on too-deep grids).
struct NumericalUnderflow : Error {
  explicit NumericalUnderflow(const std::string& what) : Error(what) {}
};

// An internal verification of a computed object failed.  These indicate
// either invalid input data or a genuine nonexistence result, never a
// silently wrong return value.
struct VerificationFailure : Error {
  explicit VerificationFailure(const std::string& what) : Error(what) {}
};

}  // namespace hodge
