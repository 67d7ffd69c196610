#pragma once

#include <stdexcept>
#include <string>

namespace mhd2d {

// All library failures derive from Error so callers (the CLI in particular)
// can map them to a single exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands that do not fit together: grid mismatch, wrong rank, bad sizes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Elliptic problem with no periodic solution (nonzero mean forcing).
class SolvabilityError : public Error {
 public:
  SolvabilityError(const std::string& what, double mean_magnitude)
      : Error(what), mean_magnitude_(mean_magnitude) {}
  double mean_magnitude() const noexcept { return mean_magnitude_; }

 private:
  double mean_magnitude_;
};

// Flow map too close to singular: min det(grad zeta) below the threshold.
class GeometryError : public Error {
 public:
  GeometryError(const std::string& what, double min_jacobian, int row, int col)
      : Error(what), min_jacobian_(min_jacobian), row_(row), col_(col) {}
  double min_jacobian() const noexcept { return min_jacobian_; }
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  double min_jacobian_;
  int row_;
  int col_;
};

// Iterative solver failure (Picard divergence, iteration cap, Newton).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

// Time step larger than the stepper's reported stability bound.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double measured, double limit)
      : Error(what), measured_(measured), limit_(limit) {}
  double measured() const noexcept { return measured_; }
  double limit() const noexcept { return limit_; }

 private:
  double measured_;
  double limit_;
};

// Input that violates an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Values outside an operation's domain, e.g. logarithms of nonpositive
// samples in a decay fit.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed files and configs.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mhd2d
