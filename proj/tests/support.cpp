#include "support.hpp"

#include <cmath>

namespace qtest {

using quasistat::PotentialOutput;

VectorXd Rng::vector(int n, double lo, double hi) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Eigen::Matrix2d Rng::rotation() {
  const double t = angle();
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  if (integer(0, 1) == 1) r.col(1) *= -1.0;  // reflections are orthonormal too
  return r;
}

PotentialOutput ConstantPotential::evaluate(const VectorXd&, const VectorXd&) const {
  const int n = num_states();
  const int k = num_controls();
  PotentialOutput out;
  out.value = c_;
  out.grad_z = VectorXd::Zero(n);
  out.grad_u = VectorXd::Zero(k);
  out.hess_zz = MatrixXd::Zero(n, n);
  out.hess_uz = MatrixXd::Zero(k, n);
  out.hess_uu = MatrixXd::Zero(k, k);
  return out;
}

PolynomialPotential::PolynomialPotential(MatrixXd a, MatrixXd b, MatrixXd c, double cubic)
    : PotentialSystem(static_cast<int>(a.rows()), static_cast<int>(c.rows())),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      cubic_(cubic) {}

PolynomialPotential PolynomialPotential::random(Rng& rng, int n, int k, double cubic) {
  MatrixXd m(n, n);
  for (auto& v : m.reshaped()) v = rng.uniform(-1, 1);
  MatrixXd a = m * m.transpose() + n * MatrixXd::Identity(n, n);
  MatrixXd b(n, k);
  for (auto& v : b.reshaped()) v = rng.uniform(-1, 1);
  MatrixXd q(k, k);
  for (auto& v : q.reshaped()) v = rng.uniform(-1, 1);
  MatrixXd c = q * q.transpose() + 0.5 * MatrixXd::Identity(k, k);
  return PolynomialPotential(a, b, c, cubic);
}

PotentialOutput PolynomialPotential::evaluate(const VectorXd& z, const VectorXd& u) const {
  PotentialOutput out;
  out.value = 0.5 * z.dot(a_ * z) + z.dot(b_ * u) + 0.5 * u.dot(c_ * u) +
              cubic_ / 6.0 * z.array().cube().sum();
  out.grad_z = a_ * z + b_ * u + 0.5 * cubic_ * z.array().square().matrix();
  out.grad_u = b_.transpose() * z + c_ * u;
  out.hess_zz = a_;
  out.hess_zz.diagonal() += cubic_ * z;
  out.hess_uz = b_.transpose();
  out.hess_uu = c_;
  return out;
}

PotentialOutput CorruptedGradient::evaluate(const VectorXd& z, const VectorXd& u) const {
  PotentialOutput out = base_.evaluate(z, u);
  out.grad_z.array() += offset_;
  return out;
}

Eigen::Vector2d linear_control(const quasistat::pendulum::LinearSpringPendulum& sys, double alpha,
                               double L_u) {
  return sys.u_crit() + L_u * quasistat::pendulum::frames(alpha).n_alpha;
}

quasistat::EquilibriumPoint linear_point(const quasistat::pendulum::LinearSpringPendulum& sys,
                                         double alpha, double L_u) {
  return quasistat::equilibrium_at(sys, VectorXd::Constant(1, alpha),
                                   linear_control(sys, alpha, L_u));
}

double discrete_action(const std::vector<double>& lambda, double alpha1, double alpha2) {
  const std::size_t n = lambda.size() - 1;
  const double h = (alpha2 - alpha1) / static_cast<double>(n);
  double j = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (lambda[i + 1] - lambda[i]) / h;
    const double p0 = lambda[i] - 1.0;
    const double p1 = lambda[i + 1] - 1.0;
    j += h * (d * d + 0.5 * (p0 * p0 + p1 * p1));
  }
  return j;
}

std::vector<double> sample(const std::function<double(double)>& f, double alpha1, double alpha2,
                           int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = f(alpha1 + (alpha2 - alpha1) * i / n);
  return out;
}

double max_abs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace qtest
