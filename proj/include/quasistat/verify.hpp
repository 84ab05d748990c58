#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quasistat/equilibrium.hpp"
#include "quasistat/pendulum.hpp"

namespace quasistat {

/// Reduced potential W*(u) on the branch through `point`, obtained by
/// re-solving the equilibrium at u starting from the tangent prediction.
double branch_energy(const PotentialSystem& system, const EquilibriumPoint& point,
                     const VectorXd& u, const SolverOptions& options = {});

/// Central-difference gradient of W* along the branch.
VectorXd fd_reduced_gradient(const PotentialSystem& system, const EquilibriumPoint& point,
                             double h, const SolverOptions& options = {});

/// Five-point-stencil Hessian of W* along the branch (fourth-order diagonal
/// and mixed stencils), re-solving the equilibrium at every stencil point.
MatrixXd fd_reduced_hessian(const PotentialSystem& system, const EquilibriumPoint& point,
                            double h, const SolverOptions& options = {});

/// True when (alpha, u) is a safe place to finite-difference the contact
/// model: away from the tanh transition (|Delta| > margin * d0, and the
/// transition resolved by a 1e-5 stencil), away from the body axes, and well
/// below the saturation cap of the inside-outside terms.
bool contact_fd_admissible(const pendulum::ContactPendulum& sys, double alpha,
                           const Eigen::Vector2d& u, double margin = 5.0);

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Oracle checks for the configured model: derivative FD checks, Hessian
/// symmetry, Schur complement vs closed form, covariance under control
/// rotations (linear model), and the reduced-Hessian identity.
std::vector<CheckRow> run_checks(const PotentialSystem& system, const SolverOptions& options,
                                 unsigned seed = 20240611u);

void print_check_table(const std::vector<CheckRow>& rows, std::ostream& os);

}  // namespace quasistat
