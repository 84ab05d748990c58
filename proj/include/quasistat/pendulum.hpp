#pragma once

#include <vector>

#include <Eigen/Core>

#include "quasistat/potential.hpp"

namespace quasistat::pendulum {

/// Body axis, its normal and the rotation by alpha.
struct Frame2D {
  Eigen::Vector2d n_alpha;
  Eigen::Vector2d n_alpha_perp;
  Eigen::Matrix2d R_alpha;
};

Frame2D frames(double alpha);

/// Shared S^1 fiber handling for both pendulum models.
class PendulumBase : public PotentialSystem {
 public:
  double fiber_distance(const VectorXd& z1, const VectorXd& z2) const override;
  VectorXd canonical_state(const VectorXd& z) const override;
  /// Uniform grid over [-pi, pi).
  std::vector<VectorXd> default_seeds(int count) const override;

 protected:
  PendulumBase() : PotentialSystem(1, 2) {}
};

/// Inverted pendulum held by a linear spring from the agent position u to the
/// tip L0 * n_alpha; gravity mg acts at the centre of mass.
class LinearSpringPendulum final : public PendulumBase {
 public:
  struct Params {
    double L0 = 1.0;
    double mg = 10.0;
    double k_c = 1.0;
  };

  explicit LinearSpringPendulum(Params params);

  PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  std::string name() const override { return "linear-pendulum"; }

  const Params& params() const noexcept { return params_; }
  /// (0, mg / 2k_c): the control where the two branches meet.
  Eigen::Vector2d u_crit() const;

 private:
  Params params_;
};

/// Pendulum whose spring stiffness depends on how deep the agent sits inside
/// a super-ellipse body: k(d) = k_min + (1 - tanh(d / d0)) / 2 * k_max with
/// d the inside-outside function of the agent in the body frame.
///
/// Hinge at the origin, centre of mass at (L0/2) n_alpha, body frame centred
/// at the centre of mass and rotated by alpha, spring tip at body coordinate
/// (L0/2, 0).
class ContactPendulum final : public PendulumBase {
 public:
  struct Params {
    double L0 = 1.0;
    double W0 = 0.1;
    double mg = 10.0;
    double k_min = 1.0;
    double k_max = 1e4;
    double eps = 0.1;
    double d0 = 0.05;  // 0.05 * L0
    double a = 0.5;    // L0 / 2
    double b = 0.05;   // W0 / 2
  };

  /// Each term (|x|/a)^(2/eps) saturates here with zero derivatives beyond.
  static constexpr double kSaturation = 1e12;

  explicit ContactPendulum(Params params);

  PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  std::string name() const override { return "contact-pendulum"; }

  const Params& params() const noexcept { return params_; }

  /// Agent position in the body frame.
  Eigen::Vector2d body_coordinates(double alpha, const Eigen::Vector2d& u) const;
  /// Inside-outside value of the agent for the body at angle alpha.
  double penetration(double alpha, const Eigen::Vector2d& u) const;

 private:
  Params params_;
};

/// k_c(d); strictly decreasing from k_min + k_max to k_min.
double contact_stiffness(double d, const ContactPendulum::Params& p);

/// (|x|/a)^(2/eps) + (|y|/b)^(2/eps) - 1 in body-frame coordinates.
double inside_outside(double x, double y, const ContactPendulum::Params& p);

struct AnalyticEquilibrium {
  double alpha_star;
  double L_u;
};

/// Stable branch alpha* = atan2(u_y - mg/2k_c, u_x) and L_u = |u - u_crit|.
AnalyticEquilibrium analytic_equilibrium(const LinearSpringPendulum& sys,
                                         const Eigen::Vector2d& u);

/// W*(u) = k_c (L_u - L0)^2 / 2 + mg u_y / 2, additive constant fixed to 0.
double reduced_potential(const LinearSpringPendulum& sys, const Eigen::Vector2d& u);

/// R diag(k_c, k_c (1 - L0/L_u)) R^T at alpha*.
Eigen::Matrix2d analytic_control_hessian(const LinearSpringPendulum& sys,
                                         const Eigen::Vector2d& u);

/// lambda(alpha) = a e^alpha + b e^-alpha + 1, the minimizer of the
/// normalized action with lambda(alpha1) = lambda1, lambda(alpha2) = lambda2.
struct OptimalLambda {
  double a = 0.0;
  double b = 0.0;

  double operator()(double alpha) const;
  double derivative(double alpha) const;
  double second_derivative(double alpha) const;
};

OptimalLambda optimal_lambda(double alpha1, double alpha2, double lambda1, double lambda2);

struct CurveSample {
  double alpha;
  double lambda;
  double u_x;
  double u_y;
};

/// Samples u(alpha) = u_crit + L0 lambda(alpha) n_alpha on [alpha1, alpha2].
/// L1 and L2 are control lengths; they are normalized by L0.
std::vector<CurveSample> optimal_control_curve(const LinearSpringPendulum& sys, double alpha1,
                                               double alpha2, double L1, double L2, int samples);

}  // namespace quasistat::pendulum
