#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace quasistat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration ran out of budget or stalled. Keeps the last iterate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last_iterate, double residual)
      : Error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::VectorXd last_iterate_;
  double residual_;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// Control input sits exactly on the critical point of an analytic model.
class CriticalControl : public Error {
 public:
  using Error::Error;
};

class DegenerateBoundary : public Error {
 public:
  using Error::Error;
};

class InvalidPath : public Error {
 public:
  using Error::Error;
};

class InvalidBounds : public Error {
 public:
  using Error::Error;
};

class NoPath : public Error {
 public:
  NoPath(const std::string& what, std::size_t reachable)
      : Error(what), reachable_(reachable) {}

  /// Number of nodes reachable from the start node.
  std::size_t reachable() const noexcept { return reachable_; }

 private:
  std::size_t reachable_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quasistat
