#pragma once

#include <span>

#include "quasistat/equilibrium.hpp"

namespace quasistat {

/// Control force, control Hessian and squared Hessian at one equilibrium.
struct ControlMetric {
  VectorXd f_ctrl;
  MatrixXd G;
  MatrixXd G2;
};

/// f_ctrl = -grad_u W at the equilibrium.
VectorXd control_force(const EquilibriumPoint& point);

/// Schur complement G = W_uu - W_uz W_zz^{-1} W_uz^T, via a factorization of
/// W_zz. Throws SingularJacobian at critical points.
MatrixXd control_hessian(const EquilibriumPoint& point);

/// G * G, symmetrized, with round-off negative eigenvalues clamped to zero.
MatrixXd squared_hessian(const EquilibriumPoint& point);

/// Squares a symmetric matrix and clamps eigenvalues in (-1e-10 |G2|, 0).
MatrixXd square_psd(const MatrixXd& G);

ControlMetric control_metric(const EquilibriumPoint& point);

/// du^T G2 du, clamped at zero.
double quadratic_cost(const MatrixXd& G2, const VectorXd& delta_u);

/// Discrete energy-form cost sum_i du_i^T G2(point_i) du_i along consecutive
/// points of one branch. Throws InvalidPath for fewer than two points.
double path_cost(std::span<const EquilibriumPoint> points);

/// Discrete length sum_i sqrt(du_i^T G2(point_i) du_i). Reporting only.
double path_length(std::span<const EquilibriumPoint> points);

}  // namespace quasistat
