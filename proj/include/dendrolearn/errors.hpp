#pragma once

#include <stdexcept>

namespace dendrolearn {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV or model file); the message carries the location.
struct ParseError : Error {
  using Error::Error;
};

// An empty field where a complete record is required.
struct MissingValueError : Error {
  using Error::Error;
};

// Data inconsistent with a declared or stored schema.
struct SchemaError : Error {
  using Error::Error;
};

// Invalid argument to a library call.
struct ArgumentError : Error {
  using Error::Error;
};

// A configured size guard was exceeded.
struct CapacityError : Error {
  using Error::Error;
};

}  // namespace dendrolearn
