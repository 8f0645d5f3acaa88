#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Gram matrix could not be factored to working precision.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& msg, double condition_estimate, int rank_estimate)
      : Error(msg), condition_estimate(condition_estimate), rank_estimate(rank_estimate) {}
  double condition_estimate;
  int rank_estimate;
};

/// Evaluation point lies outside X = {laplacian(Q) > 0}.
class NotInXError : public Error {
 public:
  explicit NotInXError(const std::string& msg) : Error(msg) {}
};

/// Operation needs a bivariate extension the weight does not carry.
class UnsupportedWeightError : public Error {
 public:
  explicit UnsupportedWeightError(const std::string& msg) : Error(msg) {}
};

/// Radial droplet-radius equation has no root in the search bracket.
class GrowthViolationError : public Error {
 public:
  explicit GrowthViolationError(const std::string& msg) : Error(msg) {}
};

/// Iterative solver exhausted its iteration budget.
class SolverFailureError : public Error {
 public:
  SolverFailureError(const std::string& msg, double residual) : Error(msg), residual(residual) {}
  double residual;
};

/// Obstacle-solver contact set reached the boundary ring.
class DomainTooSmallError : public Error {
 public:
  explicit DomainTooSmallError(const std::string& msg) : Error(msg) {}
};

/// Requested moment order is incompatible with the space dimension.
class DegreeError : public Error {
 public:
  explicit DegreeError(const std::string& msg) : Error(msg) {}
};

/// Config file failed schema validation; message carries the field path.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace bergman
