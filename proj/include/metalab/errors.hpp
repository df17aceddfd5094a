// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_ERRORS_HPP_
#define METALAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace metalab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or array with the wrong shape (odd order, mismatched n, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The upper-right block B of a symplectic matrix is (numerically) singular.
class NotFreeError : public Error {
 public:
  using Error::Error;
};

/// A quadratic phase would fold at the Nyquist limit of the grid.
class AliasingRisk : public Error {
 public:
  using Error::Error;
};

/// Two sampled objects live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Should never surface for valid input; signals a broken internal invariant.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace metalab

#endif  // METALAB_ERRORS_HPP_
