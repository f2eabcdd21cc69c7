#pragma once

#include <stdexcept>
#include <string>

namespace dickesim {

// All library failures are thrown as one of these so callers can tell a bad
// argument from a numerical breakdown without parsing messages.

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// value outside its mathematical domain (negative angle, k0 > N-1, ...)
struct DomainError : SimError {
  using SimError::SimError;
};

// malformed configuration or option (sizes, signs, ranges)
struct ParameterError : SimError {
  using SimError::SimError;
};

// operation asked for on a basis it is not defined on
struct BasisError : SimError {
  using SimError::SimError;
};

// two objects that must describe the same system do not
struct ConsistencyError : SimError {
  using SimError::SimError;
};

// a well-posed equation has no solution for these inputs
struct NoSolutionError : SimError {
  using SimError::SimError;
};

// integration failed its accuracy contract (norm drift)
struct IntegrationError : SimError {
  using SimError::SimError;
};

// state ran into the Fock truncation
struct CutoffError : SimError {
  using SimError::SimError;
};

// internal invariant violated (caller-visible bug guard)
struct ContractError : SimError {
  using SimError::SimError;
};

// schedule text problems, carrying the source position
struct ParseError : SimError {
  int line;
  int column;
  ParseError(int line_, int col_, const std::string& msg)
      : SimError("line " + std::to_string(line_) + ", column " +
                 std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

}  // namespace dickesim
