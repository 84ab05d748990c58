#include "quasistat/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace quasistat {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kBacktrack = 0.5;

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double hessian_scale(const PotentialOutput& d) {
  double s = 1.0;
  if (d.hess_zz.size()) s = std::max(s, d.hess_zz.cwiseAbs().maxCoeff());
  if (d.hess_uz.size()) s = std::max(s, d.hess_uz.cwiseAbs().maxCoeff());
  if (d.hess_uu.size()) s = std::max(s, d.hess_uu.cwiseAbs().maxCoeff());
  return s;
}

// Newton direction for grad_z = 0. Falls back to a Levenberg-Marquardt step
// when hess_zz is numerically singular; returns false if neither works.
bool newton_direction(const MatrixXd& hess, const VectorXd& grad, VectorXd& direction) {
  const MatrixXd h = symmetrized(hess);
  Eigen::FullPivLU<MatrixXd> lu(h);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  lu.setThreshold(1e-14);
  if (lu.isInvertible() && std::abs(lu.maxPivot()) > 0.0) {
    // Reject pivots that are pure round-off relative to the matrix scale.
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot > 1e-14 * scale) {
      direction = lu.solve(-grad);
      if (direction.allFinite()) return true;
    }
  }
  const double mu = 1e-6 * scale;
  const MatrixXd damped =
      h.transpose() * h + mu * mu * MatrixXd::Identity(h.rows(), h.cols());
  const Eigen::LDLT<MatrixXd> ldlt(damped);
  if (ldlt.info() != Eigen::Success) return false;
  direction = ldlt.solve(-(h.transpose() * grad));
  return direction.allFinite() && direction.norm() > 0.0;
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable:
      return "stable";
    case Stability::Unstable:
      return "unstable";
    case Stability::Critical:
      return "critical";
  }
  return "critical";
}

Stability stability_from_string(const std::string& s) {
  if (s == "stable") return Stability::Stable;
  if (s == "unstable") return Stability::Unstable;
  if (s == "critical") return Stability::Critical;
  throw Error("unknown stability tag '" + s + "'");
}

EquilibriumPoint equilibrium_at(const PotentialSystem& system, const VectorXd& z,
                                const VectorXd& u, double crit_threshold) {
  EquilibriumPoint point;
  point.z_star = z;
  point.u = u;
  point.derivs = evaluate_full(system, {z, u});
  point.energy = point.derivs.value;
  point.det_hess_zz = symmetrized(point.derivs.hess_zz).determinant();
  point.stability = classify_stability(point, crit_threshold);
  return point;
}

EquilibriumPoint solve_equilibrium(const PotentialSystem& system, const VectorXd& u,
                                   const VectorXd& z_init, const SolverOptions& options) {
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error("solve_equilibrium: tol must be positive and max_iter >= 1");
  }
  VectorXd z = z_init;
  PotentialOutput out = evaluate_full(system, {z, u});
  double residual = out.grad_z.cwiseAbs().maxCoeff();

  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (residual <= options.tol) break;

    VectorXd direction;
    if (!newton_direction(out.hess_zz, out.grad_z, direction)) {
      throw SingularJacobian(system.name() + ": singular hess_zz during Newton iteration");
    }

    const double merit = out.grad_z.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    while (t >= kMinStep) {
      const VectorXd trial = z + t * direction;
      PotentialOutput trial_out;
      try {
        trial_out = evaluate_full(system, {trial, u});
      } catch (const EvaluationError&) {
        t *= kBacktrack;
        continue;
      }
      if (trial_out.grad_z.squaredNorm() <= (1.0 - 2.0 * kArmijo * t) * merit) {
        z = trial;
        out = std::move(trial_out);
        accepted = true;
        break;
      }
      t *= kBacktrack;
    }
    residual = out.grad_z.cwiseAbs().maxCoeff();
    if (!accepted) {
      throw NonConvergence(system.name() + ": line search stalled", z, residual);
    }
  }

  if (residual > options.tol) {
    throw NonConvergence(system.name() + ": no convergence within max_iter", z, residual);
  }

  // One polishing step; near a regular root it lands at round-off level.
  VectorXd polish;
  if (residual > 0.0 && newton_direction(out.hess_zz, out.grad_z, polish)) {
    try {
      PotentialOutput polished = evaluate_full(system, {z + polish, u});
      const double r = polished.grad_z.cwiseAbs().maxCoeff();
      if (r <= residual) {
        z += polish;
        out = std::move(polished);
      }
    } catch (const EvaluationError&) {
    }
  }

  EquilibriumPoint point;
  point.z_star = z;
  point.u = u;
  point.derivs = std::move(out);
  point.energy = point.derivs.value;
  point.det_hess_zz = symmetrized(point.derivs.hess_zz).determinant();
  point.stability = classify_stability(point, options.crit_threshold);
  return point;
}

Stability classify_stability(const EquilibriumPoint& point, double crit_threshold) {
  const MatrixXd h = symmetrized(point.derivs.hess_zz);
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  const VectorXd& ev = eig.eigenvalues();
  const double threshold = crit_threshold * hessian_scale(point.derivs);
  if (ev.minCoeff() > threshold) return Stability::Stable;
  if (ev.cwiseAbs().minCoeff() <= threshold) return Stability::Critical;
  return Stability::Unstable;
}

std::vector<EquilibriumPoint> find_equilibria(const PotentialSystem& system, const VectorXd& u,
                                              const std::vector<VectorXd>& seeds,
                                              const SolverOptions& options) {
  if (seeds.empty()) {
    throw Error("find_equilibria: seed list is empty");
  }
  std::vector<EquilibriumPoint> solved;
  solved.reserve(seeds.size());
  for (const VectorXd& seed : seeds) {
    try {
      const EquilibriumPoint raw = solve_equilibrium(system, u, seed, options);
      EquilibriumPoint point =
          equilibrium_at(system, system.canonical_state(raw.z_star), u, options.crit_threshold);
      if (point.derivs.grad_z.cwiseAbs().maxCoeff() > options.tol) {
        point = raw;  // keep the solver's iterate if wrapping perturbed the residual
      }
      solved.push_back(std::move(point));
    } catch (const NonConvergence&) {
    } catch (const SingularJacobian&) {
    } catch (const EvaluationError&) {
    }
  }

  std::sort(solved.begin(), solved.end(), [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return std::lexicographical_compare(a.z_star.begin(), a.z_star.end(), b.z_star.begin(),
                                        b.z_star.end());
  });

  std::vector<EquilibriumPoint> unique;
  for (auto& candidate : solved) {
    const bool duplicate =
        std::any_of(unique.begin(), unique.end(), [&](const EquilibriumPoint& kept) {
          return system.fiber_distance(kept.z_star, candidate.z_star) <= options.dedup_radius;
        });
    if (!duplicate) unique.push_back(std::move(candidate));
  }
  return unique;
}

std::vector<EquilibriumPoint> find_equilibria(const PotentialSystem& system, const VectorXd& u,
                                              const SolverOptions& options) {
  return find_equilibria(system, u, system.default_seeds(options.seed_count), options);
}

VectorXd tangent_step(const EquilibriumPoint& point, const VectorXd& delta_u) {
  if (delta_u.size() != point.u.size()) {
    throw DimensionError("tangent_step: delta_u has wrong length");
  }
  return tangent_map(point).apply(delta_u);
}

TangentMap tangent_map(const EquilibriumPoint& point) {
  if (point.stability == Stability::Critical) {
    throw SingularJacobian("tangent map requested at a critical equilibrium");
  }
  const MatrixXd h = symmetrized(point.derivs.hess_zz);
  const Eigen::LDLT<MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success) {
    throw SingularJacobian("tangent map: factorization of hess_zz failed");
  }
  TangentMap map;
  map.matrix = -ldlt.solve(point.derivs.hess_uz.transpose());
  if (!map.matrix.allFinite()) {
    throw SingularJacobian("tangent map: non-finite solve");
  }
  return map;
}

}  // namespace quasistat
