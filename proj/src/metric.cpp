#include "quasistat/metric.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace quasistat {

namespace {

constexpr double kPsdClamp = 1e-10;

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

VectorXd control_force(const EquilibriumPoint& point) { return -point.derivs.grad_u; }

MatrixXd control_hessian(const EquilibriumPoint& point) {
  if (point.stability == Stability::Critical) {
    throw SingularJacobian("control Hessian requested at a critical equilibrium");
  }
  const PotentialOutput& d = point.derivs;
  const Eigen::LDLT<MatrixXd> ldlt(symmetrized(d.hess_zz));
  if (ldlt.info() != Eigen::Success) {
    throw SingularJacobian("control Hessian: factorization of hess_zz failed");
  }
  // X = W_zz^{-1} W_zu, then G = W_uu - W_uz X.
  const MatrixXd x = ldlt.solve(d.hess_uz.transpose());
  MatrixXd g = d.hess_uu - d.hess_uz * x;
  if (!g.allFinite()) {
    throw SingularJacobian("control Hessian: non-finite Schur complement");
  }
  return symmetrized(g);
}

MatrixXd square_psd(const MatrixXd& G) {
  MatrixXd g2 = symmetrized(G * G);
  const double norm = g2.size() ? g2.cwiseAbs().maxCoeff() : 0.0;
  if (norm == 0.0) return g2;
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(g2);
  VectorXd ev = eig.eigenvalues();
  if (ev.minCoeff() >= 0.0) return g2;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0 && ev(i) > -kPsdClamp * norm) ev(i) = 0.0;
  }
  return symmetrized(eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose());
}

MatrixXd squared_hessian(const EquilibriumPoint& point) {
  return square_psd(control_hessian(point));
}

ControlMetric control_metric(const EquilibriumPoint& point) {
  ControlMetric m;
  m.f_ctrl = control_force(point);
  m.G = control_hessian(point);
  m.G2 = square_psd(m.G);
  return m;
}

double quadratic_cost(const MatrixXd& G2, const VectorXd& delta_u) {
  if (G2.rows() != delta_u.size() || G2.cols() != delta_u.size()) {
    throw DimensionError("quadratic_cost: size mismatch");
  }
  return std::max(0.0, delta_u.dot(G2 * delta_u));
}

double path_cost(std::span<const EquilibriumPoint> points) {
  if (points.size() < 2) {
    throw InvalidPath("path_cost needs at least two points");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += quadratic_cost(squared_hessian(points[i]), points[i + 1].u - points[i].u);
  }
  return total;
}

double path_length(std::span<const EquilibriumPoint> points) {
  if (points.size() < 2) {
    throw InvalidPath("path_length needs at least two points");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += std::sqrt(quadratic_cost(squared_hessian(points[i]), points[i + 1].u - points[i].u));
  }
  return total;
}

}  // namespace quasistat
