// SPDX-License-Identifier: Apache-2.0
#ifndef STFEM_ERROR_HPP
#define STFEM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stfem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A time (or index) outside of the admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap; carries the last relative residual.
class LinearSolveError : public Error {
 public:
  LinearSolveError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stfem

#endif  // STFEM_ERROR_HPP
