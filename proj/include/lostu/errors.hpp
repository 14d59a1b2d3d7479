#pragma once

#include <stdexcept>
#include <string>

namespace lostu {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point lies at or behind the camera's focal plane.
class CheiralityError : public Error {
 public:
  using Error::Error;
};

/// Lines of sight are (numerically) parallel; the geometry does not
/// constrain the point being solved for.
class DegenerateParallax : public Error {
 public:
  using Error::Error;
};

/// A linear system has rank below what its unknowns require.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// An operation that is defined for exactly two views received a track
/// with a different view count.
class TwoViewOnly : public Error {
 public:
  using Error::Error;
};

/// Every enabled covariance is identically zero, so statistical weights
/// are undefined.
class AllSourcesZero : public Error {
 public:
  using Error::Error;
};

/// A scale-dependent Jacobian was requested but neither a point estimate
/// nor a range hint was supplied.
class MissingScale : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated type invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Scene file fails the strict schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed in a way that indicates a bug rather than
/// bad input (e.g. polynomial root finding returned nothing usable).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lostu
