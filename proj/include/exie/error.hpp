#pragma once

#include <stdexcept>
#include <string>

namespace exie {

/// Base class for every exception thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read, or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// File contents are not a decodable image (unknown magic, truncated or
/// corrupt stream, zero-dimension header).
class FormatError : public Error {
public:
  using Error::Error;
};

/// An operator sequence document failed validation.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Image dimensions violate the requirements of an operation
/// (size mismatch, upscale request, zero-sized output).
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A configuration value is out of its allowed range.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace exie
