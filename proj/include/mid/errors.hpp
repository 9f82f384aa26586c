#pragma once

#include <stdexcept>

namespace mid {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad usage or unreadable/ill-formed input supplied by the caller.
struct InputError : Error {
  using Error::Error;
};

// The requested quantity is undefined for these inputs (degenerate pair,
// singleton normalization, undecodable side information, ...).
struct DomainError : Error {
  using Error::Error;
};

// A configured resource limit was exceeded (enumeration depth, timeouts).
struct BudgetError : Error {
  using Error::Error;
};

// Decoding a serialized artifact failed.
struct CodecError : DomainError {
  using DomainError::DomainError;
};

// An external helper process misbehaved; message carries diagnostics.
struct ProcessError : Error {
  using Error::Error;
};

}  // namespace mid
