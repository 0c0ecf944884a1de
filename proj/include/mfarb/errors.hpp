#pragma once

#include <stdexcept>
#include <string>

namespace mfarb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed inputs to an operation: arity or dimension mismatch,
/// strategies referring to unknown atoms, ground-set disagreement.
struct StructuralError : Error {
  using Error::Error;
};

/// Market or strategy documents that parse but violate an invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Well-formed request whose mathematical precondition fails
/// (e.g. asking for a measure charging an M-polar scenario).
struct DomainError : Error {
  using Error::Error;
};

struct LookupError : Error {
  using Error::Error;
};

}  // namespace mfarb
