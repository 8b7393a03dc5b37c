#pragma once

#include <stdexcept>
#include <string>

namespace setret {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query grammar errors.
struct ParseError : Error {
  using Error::Error;
};
struct MixedTemplateError final : ParseError {
  using ParseError::ParseError;
};
struct EmptyAtomError final : ParseError {
  using ParseError::ParseError;
};
struct UnknownConnectiveError final : ParseError {
  using ParseError::ParseError;
};

// Data generation / corpus errors.
struct VocabTooSmallError final : Error {
  using Error::Error;
};
struct UnknownAttributeError final : Error {
  using Error::Error;
};

// Numerics.
struct ZeroVectorError final : Error {
  using Error::Error;
};
struct BatchTooSmallError final : Error {
  using Error::Error;
};
struct ShapeMismatchError final : Error {
  using Error::Error;
};
struct DivergedLossError final : Error {
  using Error::Error;
};
struct EmptyRelevantSetError final : Error {
  using Error::Error;
};

struct IoError final : Error {
  using Error::Error;
};

}  // namespace setret
