#include "quasistat/pendulum.hpp"

#include <cmath>
#include <numbers>

namespace quasistat::pendulum {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

// One term (|x|/scale)^power of the inside-outside function with its first
// and second derivatives in x.
struct PowerTerm {
  double value;
  double d1;
  double d2;
};

PowerTerm power_term(double x, double scale, double power) {
  const double r = std::abs(x) / scale;
  const double value = std::pow(r, power);
  if (value >= ContactPendulum::kSaturation) {
    return {ContactPendulum::kSaturation, 0.0, 0.0};
  }
  const double sign = x < 0.0 ? -1.0 : 1.0;
  return {value, sign * power * std::pow(r, power - 1.0) / scale,
          power * (power - 1.0) * std::pow(r, power - 2.0) / (scale * scale)};
}

struct StiffnessTerm {
  double k;
  double dk;
  double d2k;
};

StiffnessTerm stiffness_with_derivatives(double d, const ContactPendulum::Params& p) {
  // Written in e = exp(-2|d|/d0) so that 1 - tanh and sech^2 keep their
  // relative precision in both tails.
  const double x = d / p.d0;
  const double e = std::exp(-2.0 * std::abs(x));
  const double t = std::copysign((1.0 - e) / (1.0 + e), x);
  const double one_minus_t = x >= 0.0 ? 2.0 * e / (1.0 + e) : 2.0 / (1.0 + e);
  const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
  return {p.k_min + 0.5 * one_minus_t * p.k_max, -0.5 * p.k_max * sech2 / p.d0,
          p.k_max * sech2 * t / (p.d0 * p.d0)};
}

PotentialOutput pack(double value, const Vector3d& grad, const Matrix3d& hess) {
  // Variable order inside this file: (alpha, u_x, u_y).
  PotentialOutput out;
  out.value = value;
  out.grad_z = grad.head<1>();
  out.grad_u = grad.tail<2>();
  out.hess_zz = hess.topLeftCorner<1, 1>();
  out.hess_uz = hess.bottomLeftCorner<2, 1>();
  out.hess_uu = 0.5 * (hess.bottomRightCorner<2, 2>() + hess.bottomRightCorner<2, 2>().transpose());
  return out;
}

}  // namespace

Frame2D frames(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Frame2D f;
  f.n_alpha << c, s;
  f.n_alpha_perp << -s, c;
  f.R_alpha << c, -s, s, c;
  return f;
}

double PendulumBase::fiber_distance(const VectorXd& z1, const VectorXd& z2) const {
  return angular_distance(z1(0), z2(0));
}

VectorXd PendulumBase::canonical_state(const VectorXd& z) const {
  VectorXd out = z;
  out(0) = wrap_angle(z(0));
  return out;
}

std::vector<VectorXd> PendulumBase::default_seeds(int count) const {
  std::vector<VectorXd> seeds;
  const int n = std::max(count, 1);
  seeds.reserve(n);
  for (int i = 0; i < n; ++i) {
    seeds.push_back(VectorXd::Constant(1, -std::numbers::pi + 2.0 * std::numbers::pi * i / n));
  }
  return seeds;
}

// ---------------------------------------------------------------------------

LinearSpringPendulum::LinearSpringPendulum(Params params) : params_(params) {
  if (!(params_.L0 > 0.0) || !(params_.mg >= 0.0) || !(params_.k_c > 0.0)) {
    throw ConfigError("linear pendulum needs L0 > 0, mg >= 0, k_c > 0");
  }
}

Vector2d LinearSpringPendulum::u_crit() const {
  return {0.0, params_.mg / (2.0 * params_.k_c)};
}

PotentialOutput LinearSpringPendulum::evaluate(const VectorXd& z, const VectorXd& u) const {
  const auto [L0, mg, k] = params_;
  const Frame2D f = frames(z(0));
  const Vector2d uu(u(0), u(1));
  const Vector2d spring = uu - L0 * f.n_alpha;

  PotentialOutput out;
  out.value = 0.5 * mg * L0 * f.n_alpha.y() + 0.5 * k * spring.squaredNorm();
  // d/dalpha of |u - L0 n|^2 / 2 is -L0 n_perp . u
  out.grad_z = VectorXd::Constant(1, 0.5 * mg * L0 * f.n_alpha.x() - k * L0 * f.n_alpha_perp.dot(uu));
  out.grad_u = k * spring;
  out.hess_zz = MatrixXd::Constant(1, 1, -0.5 * mg * L0 * f.n_alpha.y() + k * L0 * f.n_alpha.dot(uu));
  out.hess_uz = -k * L0 * f.n_alpha_perp;
  out.hess_uu = k * MatrixXd::Identity(2, 2);
  return out;
}

// ---------------------------------------------------------------------------

ContactPendulum::ContactPendulum(Params params) : params_(params) {
  const auto& p = params_;
  if (!(p.L0 > 0.0) || !(p.W0 > 0.0) || !(p.mg >= 0.0)) {
    throw ConfigError("contact pendulum needs L0 > 0, W0 > 0, mg >= 0");
  }
  if (!(p.eps > 0.0 && p.eps < 2.0)) {
    throw ConfigError("contact pendulum needs 0 < eps < 2");
  }
  if (!(p.k_min > 0.0) || !(p.k_max > p.k_min) || !(p.d0 > 0.0)) {
    throw ConfigError("contact pendulum needs 0 < k_min < k_max and d0 > 0");
  }
  if (!(p.a > 0.0) || !(p.b > 0.0)) {
    throw ConfigError("contact pendulum needs positive super-ellipse half-axes");
  }
}

Vector2d ContactPendulum::body_coordinates(double alpha, const Vector2d& u) const {
  const Frame2D f = frames(alpha);
  return {f.n_alpha.dot(u) - 0.5 * params_.L0, f.n_alpha_perp.dot(u)};
}

double ContactPendulum::penetration(double alpha, const Vector2d& u) const {
  const Vector2d q = body_coordinates(alpha, u);
  return inside_outside(q.x(), q.y(), params_);
}

PotentialOutput ContactPendulum::evaluate(const VectorXd& z, const VectorXd& u) const {
  const auto& p = params_;
  const double half = 0.5 * p.L0;
  const Frame2D f = frames(z(0));
  const Vector2d uu(u(0), u(1));

  // Body-frame agent position q = (x, y) as a function of v = (alpha, u_x, u_y).
  const double x = f.n_alpha.dot(uu) - half;
  const double y = f.n_alpha_perp.dot(uu);
  Eigen::Matrix<double, 2, 3> jac;
  jac << y, f.n_alpha.x(), f.n_alpha.y(),
         -x - half, f.n_alpha_perp.x(), f.n_alpha_perp.y();
  Matrix3d hess_x = Matrix3d::Zero();
  hess_x(0, 0) = -x - half;
  hess_x.block<1, 2>(0, 1) = f.n_alpha_perp.transpose();
  hess_x.block<2, 1>(1, 0) = f.n_alpha_perp;
  Matrix3d hess_y = Matrix3d::Zero();
  hess_y(0, 0) = -y;
  hess_y.block<1, 2>(0, 1) = -f.n_alpha.transpose();
  hess_y.block<2, 1>(1, 0) = -f.n_alpha;

  // Spring energy F(q) = k(Delta(q)) |q - c|^2 / 2 with the tip c = (L0/2, 0).
  const double power = 2.0 / p.eps;
  const PowerTerm tx = power_term(x, p.a, power);
  const PowerTerm ty = power_term(y, p.b, power);
  const double delta = tx.value + ty.value - 1.0;
  const Vector2d grad_delta(tx.d1, ty.d1);
  const StiffnessTerm st = stiffness_with_derivatives(delta, p);
  const Vector2d w(x - half, y);
  const double s = w.squaredNorm();

  const Vector2d grad_f = 0.5 * st.dk * s * grad_delta + st.k * w;
  Matrix2d hess_f = 0.5 * st.d2k * s * grad_delta * grad_delta.transpose();
  hess_f.diagonal() += 0.5 * st.dk * s * Vector2d(tx.d2, ty.d2);
  hess_f += st.dk * (grad_delta * w.transpose() + w * grad_delta.transpose());
  hess_f.diagonal().array() += st.k;

  Vector3d grad = jac.transpose() * grad_f;
  Matrix3d hess = jac.transpose() * hess_f * jac + grad_f.x() * hess_x + grad_f.y() * hess_y;

  const double gravity = 0.5 * p.mg * p.L0;
  grad(0) += gravity * f.n_alpha.x();
  hess(0, 0) -= gravity * f.n_alpha.y();

  return pack(gravity * f.n_alpha.y() + 0.5 * st.k * s, grad, hess);
}

double contact_stiffness(double d, const ContactPendulum::Params& p) {
  return stiffness_with_derivatives(d, p).k;
}

double inside_outside(double x, double y, const ContactPendulum::Params& p) {
  const double power = 2.0 / p.eps;
  return power_term(x, p.a, power).value + power_term(y, p.b, power).value - 1.0;
}

// ---------------------------------------------------------------------------

AnalyticEquilibrium analytic_equilibrium(const LinearSpringPendulum& sys, const Vector2d& u) {
  const Vector2d rel = u - sys.u_crit();
  if (rel.x() == 0.0 && rel.y() == 0.0) {
    throw CriticalControl("analytic equilibrium undefined at u = u_crit");
  }
  return {std::atan2(rel.y(), rel.x()), rel.norm()};
}

double reduced_potential(const LinearSpringPendulum& sys, const Vector2d& u) {
  const AnalyticEquilibrium eq = analytic_equilibrium(sys, u);
  const auto& p = sys.params();
  const double stretch = eq.L_u - p.L0;
  return 0.5 * p.k_c * stretch * stretch + 0.5 * p.mg * u.y();
}

Matrix2d analytic_control_hessian(const LinearSpringPendulum& sys, const Vector2d& u) {
  const AnalyticEquilibrium eq = analytic_equilibrium(sys, u);
  const auto& p = sys.params();
  const Frame2D f = frames(eq.alpha_star);
  const Vector2d eig(p.k_c, p.k_c * (1.0 - p.L0 / eq.L_u));
  return f.R_alpha * eig.asDiagonal() * f.R_alpha.transpose();
}

double OptimalLambda::operator()(double alpha) const {
  return a * std::exp(alpha) + b * std::exp(-alpha) + 1.0;
}

double OptimalLambda::derivative(double alpha) const {
  return a * std::exp(alpha) - b * std::exp(-alpha);
}

double OptimalLambda::second_derivative(double alpha) const {
  return a * std::exp(alpha) + b * std::exp(-alpha);
}

OptimalLambda optimal_lambda(double alpha1, double alpha2, double lambda1, double lambda2) {
  if (alpha1 == alpha2) {
    throw DegenerateBoundary("optimal_lambda needs alpha1 != alpha2");
  }
  // [e^a1 e^-a1; e^a2 e^-a2] [a; b] = [lambda1 - 1; lambda2 - 1]
  const double r1 = lambda1 - 1.0;
  const double r2 = lambda2 - 1.0;
  const double det = std::exp(alpha1 - alpha2) - std::exp(alpha2 - alpha1);
  OptimalLambda sol;
  sol.a = (r1 * std::exp(-alpha2) - r2 * std::exp(-alpha1)) / det;
  sol.b = (r2 * std::exp(alpha1) - r1 * std::exp(alpha2)) / det;
  return sol;
}

std::vector<CurveSample> optimal_control_curve(const LinearSpringPendulum& sys, double alpha1,
                                               double alpha2, double L1, double L2, int samples) {
  if (samples < 2) {
    throw Error("optimal_control_curve needs at least two samples");
  }
  const auto& p = sys.params();
  const OptimalLambda lambda = optimal_lambda(alpha1, alpha2, L1 / p.L0, L2 / p.L0);
  const Vector2d uc = sys.u_crit();
  std::vector<CurveSample> curve;
  curve.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double alpha =
        i == samples - 1 ? alpha2 : alpha1 + (alpha2 - alpha1) * i / (samples - 1);
    const double l = lambda(alpha);
    const Vector2d u = uc + p.L0 * l * frames(alpha).n_alpha;
    curve.push_back({alpha, l, u.x(), u.y()});
  }
  return curve;
}

}  // namespace quasistat::pendulum
