#pragma once

#include <stdexcept>
#include <string>

namespace pwreath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data (malformed group tables, bad element syntax, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotNormal : public Error {
 public:
  using Error::Error;
};

/// A construction would exceed the configured order cap.
class OrderOverflow : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration refused to run above its size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class LevelMismatch : public Error {
 public:
  using Error::Error;
};

class NotCaseB : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameters : public Error {
 public:
  using Error::Error;
};

/// An isoclinism witness required for a certificate could not be found
/// within the search budget.
class WitnessBudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// The detection matrix in some degree is not of full row rank, or a
/// detection tuple is not in its row space.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

}  // namespace pwreath
