#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vip {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure exhausted its budget or detected it cannot converge.
/// Carries the last iterate it produced.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last)
      : Error(what), last_iterate_(std::move(last)) {}

  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

/// Invalid experiment configuration (parse or validation failure).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vip
