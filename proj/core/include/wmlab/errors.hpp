#pragma once

#include <stdexcept>
#include <string>

namespace wmlab {

// Root of every exception the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two objects were built on different phase-space grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Spectral star product applied outside its band-limited domain.
class BandLimitError : public Error {
 public:
  using Error::Error;
};

// Too few time steps for the requested potential strength.
class StepResolutionError : public Error {
 public:
  using Error::Error;
};

// A symbol or pulse leaks to the edge of its box or its time window.
class SupportError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wmlab
