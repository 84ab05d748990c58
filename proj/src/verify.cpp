#include "quasistat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "quasistat/metric.hpp"

namespace quasistat {

namespace {

using Eigen::Vector2d;

double max_abs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

double branch_energy(const PotentialSystem& system, const EquilibriumPoint& point,
                     const VectorXd& u, const SolverOptions& options) {
  const VectorXd guess = point.z_star + tangent_step(point, u - point.u);
  return solve_equilibrium(system, u, guess, options).energy;
}

VectorXd fd_reduced_gradient(const PotentialSystem& system, const EquilibriumPoint& point,
                             double h, const SolverOptions& options) {
  const Eigen::Index k = point.u.size();
  VectorXd grad(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    VectorXd e = VectorXd::Zero(k);
    e(i) = h;
    grad(i) = (branch_energy(system, point, point.u + e, options) -
               branch_energy(system, point, point.u - e, options)) /
              (2.0 * h);
  }
  return grad;
}

MatrixXd fd_reduced_hessian(const PotentialSystem& system, const EquilibriumPoint& point,
                            double h, const SolverOptions& options) {
  const Eigen::Index k = point.u.size();
  auto energy_at = [&](Eigen::Index i, int si, Eigen::Index j, int sj) {
    VectorXd u = point.u;
    u(i) += si * h;
    u(j) += sj * h;
    return branch_energy(system, point, u, options);
  };
  MatrixXd hess(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    VectorXd e = VectorXd::Zero(k);
    auto along = [&](int s) {
      e.setZero();
      e(i) = s * h;
      return branch_energy(system, point, point.u + e, options);
    };
    hess(i, i) = (-along(2) + 16.0 * along(1) - 30.0 * point.energy + 16.0 * along(-1) -
                  along(-2)) /
                 (12.0 * h * h);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double near = energy_at(i, 1, j, 1) - energy_at(i, 1, j, -1) -
                          energy_at(i, -1, j, 1) + energy_at(i, -1, j, -1);
      const double far = energy_at(i, 2, j, 2) - energy_at(i, 2, j, -2) -
                         energy_at(i, -2, j, 2) + energy_at(i, -2, j, -2);
      hess(i, j) = hess(j, i) = (16.0 * near - far) / (48.0 * h * h);
    }
  }
  return hess;
}

bool contact_fd_admissible(const pendulum::ContactPendulum& sys, double alpha,
                           const Vector2d& u, double margin) {
  const auto& p = sys.params();
  const Vector2d q = sys.body_coordinates(alpha, u);
  if (std::abs(q.x()) < 1e-3 || std::abs(q.y()) < 1e-3) return false;
  const double power = 2.0 / p.eps;
  const double cap = 1e-3 * pendulum::ContactPendulum::kSaturation;
  if (std::pow(std::abs(q.x()) / p.a, power) > cap || std::pow(std::abs(q.y()) / p.b, power) > cap) {
    return false;
  }
  const double delta = sys.penetration(alpha, u);
  if (std::abs(delta) <= margin * p.d0) return false;
  // The tanh term varies on a control scale of d0 / |grad Delta|; the
  // stencil must resolve it wherever that term is not negligible.
  const double gx = power / p.a * std::pow(std::abs(q.x()) / p.a, power - 1.0);
  const double gy = power / p.b * std::pow(std::abs(q.y()) / p.b, power - 1.0);
  const double sech = 1.0 / std::cosh(std::min(delta / p.d0, 350.0));
  const double inv_width = std::hypot(gx, gy) / p.d0;
  return p.k_max * sech * sech * std::pow(inv_width, 3) * 1e-10 < 1e-8;
}

std::vector<CheckRow> run_checks(const PotentialSystem& system, const SolverOptions& options,
                                 unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<CheckRow> rows;

  const auto* linear = dynamic_cast<const pendulum::LinearSpringPendulum*>(&system);
  const auto* contact = dynamic_cast<const pendulum::ContactPendulum*>(&system);

  // Random configurations for the derivative checks.
  std::vector<Configuration> cfgs;
  while (cfgs.size() < 100) {
    Configuration c{VectorXd(system.num_states()), VectorXd(system.num_controls())};
    for (auto& v : c.z) v = unit(rng) * (linear || contact ? std::numbers::pi : 1.0);
    for (auto& v : c.u) v = unit(rng) * 1.5;
    if (linear) c.u += linear->u_crit();
    if (contact && !contact_fd_admissible(*contact, c.z(0), Vector2d(c.u(0), c.u(1)))) continue;
    cfgs.push_back(std::move(c));
  }

  double fd_worst = 0.0;
  bool fd_ok = true;
  double sym_worst = 0.0;
  for (const auto& c : cfgs) {
    const DerivativeReport report = fd_check_derivatives(system, c, 1e-5);
    fd_ok = fd_ok && report.passed(1e-5);
    for (const auto& b : report.blocks) {
      if (b.reliable) fd_worst = std::max(fd_worst, b.rel_error);
    }
    const PotentialOutput out = evaluate_full(system, c);
    const double zz = max_abs(out.hess_zz - out.hess_zz.transpose()) /
                      std::max(1.0, max_abs(out.hess_zz));
    const double uu = max_abs(out.hess_uu - out.hess_uu.transpose()) /
                      std::max(1.0, max_abs(out.hess_uu));
    sym_worst = std::max({sym_worst, zz, uu});
  }
  rows.push_back({"fd-derivatives", fd_worst, 1e-5, fd_ok && fd_worst < 1e-5});
  rows.push_back({"hessian-symmetry", sym_worst, 1e-12, sym_worst <= 1e-12});

  // Equilibria for the metric checks.
  std::vector<EquilibriumPoint> points;
  if (linear) {
    const auto& p = linear->params();
    std::uniform_real_distribution<double> len(0.2, 3.0);
    for (int i = 0; i < 50; ++i) {
      const double alpha = unit(rng) * std::numbers::pi;
      const Vector2d u = linear->u_crit() + len(rng) * p.L0 * pendulum::frames(alpha).n_alpha;
      points.push_back(equilibrium_at(system, VectorXd::Constant(1, alpha), u,
                                      options.crit_threshold));
    }
  } else if (contact) {
    // Far-field floor points and points deep inside the body.
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    int far = 0;
    int inside = 0;
    for (int attempt = 0; attempt < 2000 && (far < 8 || inside < 8); ++attempt) {
      const bool want_far = far < 8;
      const double r = want_far ? 1.3 + 0.2 * (unit(rng) + 1.0) : 0.3 + 0.25 * (unit(rng) + 1.0);
      const Vector2d u = r * pendulum::frames(angle(rng)).n_alpha;
      for (const EquilibriumPoint& eq : find_equilibria(system, u, options)) {
        if (eq.stability != Stability::Stable) continue;
        const double d = contact->penetration(eq.z_star(0), u);
        if (want_far && d > 5.0 * contact->params().d0 && far < 8) {
          points.push_back(eq);
          ++far;
        } else if (!want_far && d < -0.5 && inside < 8) {
          points.push_back(eq);
          ++inside;
        }
      }
    }
  }

  if (linear) {
    double worst = 0.0;
    for (const auto& pt : points) {
      const Vector2d u(pt.u(0), pt.u(1));
      worst = std::max(worst,
                       max_abs(control_hessian(pt) - pendulum::analytic_control_hessian(*linear, u)));
    }
    rows.push_back({"schur-vs-closed-form", worst, 1e-10, worst <= 1e-10});

    double g_worst = 0.0;
    double g2_worst = 0.0;
    for (int r = 0; r < 20; ++r) {
      const Eigen::Matrix2d j = rotation(unit(rng) * std::numbers::pi);
      const LinearControlChange rotated(system, j);
      for (std::size_t i = 0; i < points.size(); i += 5) {
        const auto& pt = points[i];
        const EquilibriumPoint tp =
            equilibrium_at(rotated, pt.z_star, j.transpose() * pt.u, options.crit_threshold);
        const MatrixXd g = control_hessian(pt);
        g_worst = std::max(g_worst, max_abs(control_hessian(tp) - j.transpose() * g * j));
        g2_worst = std::max(g2_worst,
                            max_abs(squared_hessian(tp) - j.transpose() * squared_hessian(pt) * j));
      }
    }
    rows.push_back({"covariance-G", g_worst, 1e-8, g_worst <= 1e-8});
    rows.push_back({"covariance-G2", g2_worst, 1e-8, g2_worst <= 1e-8});
  }

  if (!points.empty()) {
    double worst = 0.0;
    const std::size_t stride = linear ? 5 : 1;
    for (std::size_t i = 0; i < points.size(); i += stride) {
      const MatrixXd g = control_hessian(points[i]);
      const MatrixXd fd = fd_reduced_hessian(system, points[i], 1e-4, options);
      worst = std::max(worst, max_abs(g - fd) / std::max(max_abs(g), 1e-12));
    }
    rows.push_back({"reduced-hessian-identity", worst, 1e-4, worst <= 1e-4});
  }
  return rows;
}

void print_check_table(const std::vector<CheckRow>& rows, std::ostream& os) {
  os << std::left << std::setw(28) << "check" << std::setw(14) << "value" << std::setw(10)
     << "tol"
     << "result\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(28) << r.name << std::setw(14) << std::setprecision(4)
       << std::scientific << r.value << std::setw(10) << std::setprecision(0) << r.tolerance
       << (r.passed ? "PASS" : "FAIL") << '\n';
  }
  os << std::defaultfloat << std::setprecision(6);
}

}  // namespace quasistat
