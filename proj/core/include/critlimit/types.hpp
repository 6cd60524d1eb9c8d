#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace critlimit {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad expression, bad problem file, inconsistent spec.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a polynomial expression, with the byte offset where it was found.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Too many homotopy paths failed; the run should be repeated with another seed.
class PathBudgetError : public Error {
 public:
  PathBudgetError(const std::string& message, std::size_t failures, std::size_t total)
      : Error(message), failures_(failures), total_(total) {}

  std::size_t failures() const noexcept { return failures_; }
  std::size_t total() const noexcept { return total_; }

 private:
  std::size_t failures_;
  std::size_t total_;
};

/// Two random draws that should agree generically did not.
class GenericityFault : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach its stopping criterion.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace critlimit
