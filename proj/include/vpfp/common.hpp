#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vpfp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class of all errors raised by the library. The message always names
/// the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(module) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

/// Invalid user input (bad grid bounds, unknown scenario, malformed config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Array shapes that do not conform to the grid or to each other.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Singular solves, exp overflow, non-orthonormal bases.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace vpfp
