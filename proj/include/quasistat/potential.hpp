#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "quasistat/errors.hpp"

namespace quasistat {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A point (z, u) of the configuration space: internal states and controls.
struct Configuration {
  VectorXd z;
  VectorXd u;
};

/// Energy and all derivative blocks of W(z, u) at one configuration.
///
/// `hess_uz` is K x N and holds the derivative of `grad_z` along the control
/// directions; the z-u block is always its transpose and is never stored.
struct PotentialOutput {
  double value = 0.0;
  VectorXd grad_z;
  VectorXd grad_u;
  MatrixXd hess_zz;
  MatrixXd hess_uz;
  MatrixXd hess_uu;

  bool all_finite() const;
};

/// Smooth potential W(z, u) over N internal states and K controls.
///
/// Implementations are immutable after construction and `evaluate` must be
/// safe to call concurrently.
class PotentialSystem {
 public:
  virtual ~PotentialSystem() = default;

  int num_states() const noexcept { return num_states_; }
  int num_controls() const noexcept { return num_controls_; }

  virtual PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const = 0;

  /// Distance between two internal states on the same fiber. Euclidean unless
  /// the state has a periodic coordinate.
  virtual double fiber_distance(const VectorXd& z1, const VectorXd& z2) const;

  /// Representative of z used for reporting and ordering (e.g. angle wrapped
  /// to [-pi, pi)).
  virtual VectorXd canonical_state(const VectorXd& z) const { return z; }

  /// Seeds spanning the natural range of the fiber.
  virtual std::vector<VectorXd> default_seeds(int count) const;

  virtual std::string name() const = 0;

 protected:
  PotentialSystem(int num_states, int num_controls);

 private:
  int num_states_;
  int num_controls_;
};

/// W~(z, u~) = W(z, J u~) for a constant square matrix J. With J orthonormal
/// this is a rotation (or reflection) of the control space.
class LinearControlChange final : public PotentialSystem {
 public:
  LinearControlChange(const PotentialSystem& base, MatrixXd jacobian);

  PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  double fiber_distance(const VectorXd& z1, const VectorXd& z2) const override;
  VectorXd canonical_state(const VectorXd& z) const override;
  std::vector<VectorXd> default_seeds(int count) const override;
  std::string name() const override;

  const MatrixXd& jacobian() const noexcept { return jacobian_; }

 private:
  const PotentialSystem& base_;
  MatrixXd jacobian_;
};

/// Validated evaluation: checks dimensions and finiteness of inputs and output.
PotentialOutput evaluate_full(const PotentialSystem& system, const Configuration& cfg);

double fiber_distance(const PotentialSystem& system, const VectorXd& z1, const VectorXd& z2);

/// Finite-difference comparison of one analytic derivative block.
struct BlockCheck {
  std::string block;
  double rel_error = 0.0;  // max-abs difference over max-abs block magnitude
  double noise = 0.0;      // estimated round-off level of the FD estimate, same scale
  bool reliable = true;    // false when the FD estimate cannot resolve 1e-6 relative
};

struct DerivativeReport {
  std::vector<BlockCheck> blocks;

  double max_rel_error() const;
  /// Every reliable block is below `tol`; unreliable blocks are ignored.
  bool passed(double tol) const;
  bool all_reliable() const;
};

/// Central-difference check of gradients against values and of Hessians
/// against gradients, including the mixed z-u block from both sides.
DerivativeReport fd_check_derivatives(const PotentialSystem& system, const Configuration& cfg,
                                      double step);

/// Wraps an angle to [-pi, pi).
double wrap_angle(double angle);

/// Shortest distance between two angles on the circle, in [0, pi].
double angular_distance(double a, double b);

}  // namespace quasistat
