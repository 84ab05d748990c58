#pragma once

#include <vector>

#include "quasistat/potential.hpp"

namespace quasistat {

enum class Stability { Stable, Unstable, Critical };

const char* to_string(Stability s);
Stability stability_from_string(const std::string& s);

/// A solved point of the equilibrium manifold with its cached derivatives.
struct EquilibriumPoint {
  VectorXd z_star;
  VectorXd u;
  double energy = 0.0;  // reduced potential W*(u) on this branch
  Stability stability = Stability::Critical;
  double det_hess_zz = 0.0;
  PotentialOutput derivs;
};

struct SolverOptions {
  double tol = 1e-10;  // on max |grad_z|
  int max_iter = 100;
  double crit_threshold = 1e-8;
  double dedup_radius = 1e-6;  // in fiber distance
  int seed_count = 16;
};

/// Evaluates and classifies (z, u) without solving. Use when z is already
/// known to be an equilibrium (e.g. from a closed form).
EquilibriumPoint equilibrium_at(const PotentialSystem& system, const VectorXd& z,
                                const VectorXd& u, double crit_threshold = 1e-8);

/// Newton iteration on grad_z = 0 at fixed u, globalized by backtracking on
/// |grad_z|^2. Throws NonConvergence or SingularJacobian.
EquilibriumPoint solve_equilibrium(const PotentialSystem& system, const VectorXd& u,
                                   const VectorXd& z_init, const SolverOptions& options = {});

/// Stable: smallest eigenvalue of hess_zz above the threshold. Critical:
/// smallest |eigenvalue| at or below it. The threshold is scaled by the
/// magnitude of the full Hessian at the point (floored at 1).
Stability classify_stability(const EquilibriumPoint& point, double crit_threshold);

/// All distinct equilibria reached from `seeds`, sorted by energy and then by
/// canonical fiber coordinate. Failed solves are dropped.
std::vector<EquilibriumPoint> find_equilibria(const PotentialSystem& system, const VectorXd& u,
                                              const std::vector<VectorXd>& seeds,
                                              const SolverOptions& options = {});

/// Convenience overload using the system's default seeds.
std::vector<EquilibriumPoint> find_equilibria(const PotentialSystem& system, const VectorXd& u,
                                              const SolverOptions& options = {});

/// First-order response dz = -(hess_zz)^{-1} hess_uz^T du of the branch
/// through `point`. Throws SingularJacobian at critical points.
VectorXd tangent_step(const EquilibriumPoint& point, const VectorXd& delta_u);

/// N x K matrix of the tangent plane, dz = map * du.
struct TangentMap {
  MatrixXd matrix;

  VectorXd apply(const VectorXd& delta_u) const { return matrix * delta_u; }
};

TangentMap tangent_map(const EquilibriumPoint& point);

}  // namespace quasistat
