#pragma once

#include <stdexcept>
#include <string>

namespace twophase {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid parameter value (sigma <= 0, lambda <= 0, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Input carries no information to split (constant image, single-bin histogram).
struct DegenerateInputError : Error {
  using Error::Error;
};

/// A file could not be opened, read or written.
struct IoError : Error {
  using Error::Error;
};

/// File exists but is not a supported PGM/PNG variant.
struct UnsupportedFormatError : Error {
  using Error::Error;
};

struct EmptyImageError : Error {
  using Error::Error;
};

/// Caller violated a documented precondition on the data itself.
struct ContractError : Error {
  using Error::Error;
};

}  // namespace twophase
