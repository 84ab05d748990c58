#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "quasistat/pendulum.hpp"
#include "support.hpp"

using namespace quasistat;
using namespace quasistat::pendulum;
using qtest::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Frames, Examples) {
  const Frame2D f0 = frames(0.0);
  EXPECT_EQ(f0.n_alpha, Eigen::Vector2d(1, 0));
  EXPECT_EQ(f0.n_alpha_perp, Eigen::Vector2d(0, 1));
  EXPECT_EQ(f0.R_alpha, Eigen::Matrix2d::Identity());
  const Frame2D f1 = frames(kPi / 2);
  EXPECT_NEAR((f1.n_alpha - Eigen::Vector2d(0, 1)).norm(), 0.0, 1e-16);
  EXPECT_NEAR((f1.n_alpha_perp - Eigen::Vector2d(-1, 0)).norm(), 0.0, 1e-16);
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix2d r = frames(rng.angle()).R_alpha;
    ASSERT_LE((r * r.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(LinearSpringPendulum, RejectsInvalidParameters) {
  EXPECT_THROW(LinearSpringPendulum({0.0, 10, 1}), ConfigError);
  EXPECT_THROW(LinearSpringPendulum({1, 10, -1}), ConfigError);
  EXPECT_THROW(LinearSpringPendulum({1, NAN, 1}), ConfigError);
}

TEST(AnalyticEquilibrium, Examples) {
  const LinearSpringPendulum sys({});
  const auto a = analytic_equilibrium(sys, {1, 5});
  EXPECT_DOUBLE_EQ(a.alpha_star, 0.0);
  EXPECT_DOUBLE_EQ(a.L_u, 1.0);
  const auto b = analytic_equilibrium(sys, {0, 7});
  EXPECT_DOUBLE_EQ(b.alpha_star, kPi / 2);
  EXPECT_DOUBLE_EQ(b.L_u, 2.0);
  EXPECT_THROW(analytic_equilibrium(sys, sys.u_crit()), CriticalControl);
}

TEST(AnalyticEquilibrium, MatchesSolverAndOrthogonality) {
  const LinearSpringPendulum sys({2.0, 7.0, 3.0});
  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Vector2d u = sys.u_crit() + Eigen::Vector2d(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const auto a = analytic_equilibrium(sys, u);
    if (a.L_u < 0.05) continue;
    const EquilibriumPoint p = solve_equilibrium(sys, u, VectorXd::Constant(1, a.alpha_star + 0.3));
    ASSERT_NEAR(angular_distance(p.z_star(0), a.alpha_star), 0.0, 1e-8);
    const Frame2D f = frames(a.alpha_star);
    ASSERT_NEAR(f.n_alpha_perp.dot(u - sys.u_crit()), 0.0, 1e-12);
    ASSERT_NEAR(p.derivs.hess_zz(0, 0), sys.params().k_c * sys.params().L0 * a.L_u, 1e-10);
  }
}

TEST(ReducedPotential, RestLengthAndDifferences) {
  const LinearSpringPendulum sys({});
  const auto& p = sys.params();
  const Eigen::Vector2d rest = qtest::linear_control(sys, 0.4, p.L0);
  EXPECT_NEAR(reduced_potential(sys, rest), 0.5 * p.mg * rest.y(), 1e-12);
  // Differences agree with the full potential on the branch.
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d u1 = qtest::linear_control(sys, rng.angle(), rng.uniform(0.2, 3));
    const Eigen::Vector2d u2 = qtest::linear_control(sys, rng.angle(), rng.uniform(0.2, 3));
    const double w1 = evaluate_full(sys, {VectorXd::Constant(1, analytic_equilibrium(sys, u1).alpha_star), u1}).value;
    const double w2 = evaluate_full(sys, {VectorXd::Constant(1, analytic_equilibrium(sys, u2).alpha_star), u2}).value;
    ASSERT_NEAR(reduced_potential(sys, u1) - reduced_potential(sys, u2), w1 - w2, 1e-10);
  }
}

TEST(ReducedPotential, GradientIsMinusControlForce) {
  const LinearSpringPendulum sys({});
  Rng rng(44);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d u = qtest::linear_control(sys, rng.angle(), rng.uniform(0.3, 3));
    const EquilibriumPoint p =
        equilibrium_at(sys, VectorXd::Constant(1, analytic_equilibrium(sys, u).alpha_star), u);
    const double h = 1e-6;
    Eigen::Vector2d fd;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e(k) = h;
      fd(k) = (reduced_potential(sys, u + e) - reduced_potential(sys, u - e)) / (2 * h);
    }
    ASSERT_LE((fd + (-p.derivs.grad_u)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(AnalyticControlHessian, Limits) {
  const LinearSpringPendulum sys({});
  const auto& p = sys.params();
  const Eigen::Matrix2d far = analytic_control_hessian(sys, qtest::linear_control(sys, 0.3, 1e8));
  EXPECT_LE((far - p.k_c * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-7);
  const Eigen::Matrix2d half = analytic_control_hessian(sys, qtest::linear_control(sys, 0.3, 0.5));
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(half).eigenvalues();
  EXPECT_NEAR(ev(0), -p.k_c, 1e-12);
  EXPECT_NEAR(ev(1), p.k_c, 1e-12);
}

TEST(OptimalLambda, ConstantSolutionForRestLengths) {
  const OptimalLambda l = optimal_lambda(-kPi / 2, kPi / 2, 1.0, 1.0);
  EXPECT_EQ(l.a, 0.0);
  EXPECT_EQ(l.b, 0.0);
  for (double a : {-1.5, 0.0, 0.7}) EXPECT_EQ(l(a), 1.0);
}

TEST(OptimalLambda, BoundaryConditionsAndOde) {
  Rng rng(45);
  for (int i = 0; i < 500; ++i) {
    const double a1 = rng.uniform(-3, 3);
    const double a2 = a1 + rng.uniform(0.1, 3) * (rng.integer(0, 1) ? 1 : -1);
    const double l1 = rng.uniform(0.2, 3), l2 = rng.uniform(0.2, 3);
    const OptimalLambda l = optimal_lambda(a1, a2, l1, l2);
    ASSERT_NEAR(l(a1), l1, 1e-12);
    ASSERT_NEAR(l(a2), l2, 1e-12);
    const double x = rng.uniform(std::min(a1, a2), std::max(a1, a2));
    ASSERT_NEAR(l.second_derivative(x), l(x) - 1.0, 1e-9);
  }
  EXPECT_THROW(optimal_lambda(0.4, 0.4, 1, 2), DegenerateBoundary);
}

TEST(OptimalLambda, StaysPositiveForFigureScenario) {
  for (double l1 = 0.5; l1 <= 1.5 + 1e-12; l1 += 0.05) {
    for (double l2 = 0.5; l2 <= 1.5 + 1e-12; l2 += 0.05) {
      const OptimalLambda l = optimal_lambda(-kPi / 2, kPi / 2, l1, l2);
      for (int i = 0; i <= 400; ++i) ASSERT_GT(l(-kPi / 2 + kPi * i / 400), 0.0);
    }
  }
}

TEST(OptimalLambda, BeatsPerturbations) {
  Rng rng(46);
  const double a1 = -kPi / 2, a2 = kPi / 2;
  const int n = 400;
  for (int trial = 0; trial < 50; ++trial) {
    const double l1 = rng.uniform(0.5, 1.5), l2 = rng.uniform(0.5, 1.5);
    const OptimalLambda l = optimal_lambda(a1, a2, l1, l2);
    const double base = qtest::discrete_action(qtest::sample(l, a1, a2, n), a1, a2);
    const int mode = rng.integer(1, 5);
    const double eps = rng.uniform(-0.2, 0.2);
    const auto perturbed = qtest::sample(
        [&](double a) { return l(a) + eps * std::sin(mode * (a - a1) * kPi / (a2 - a1)); }, a1,
        a2, n);
    ASSERT_GE(qtest::discrete_action(perturbed, a1, a2), base - 1e-12);
  }
}

TEST(OptimalControlCurve, EndpointsAndEquilibria) {
  const LinearSpringPendulum sys({});
  const double a1 = -kPi / 2, a2 = kPi / 2;
  const auto curve = optimal_control_curve(sys, a1, a2, 1.3, 0.7, 101);
  ASSERT_EQ(curve.size(), 101u);
  EXPECT_EQ(curve.front().alpha, a1);
  EXPECT_EQ(curve.back().alpha, a2);
  EXPECT_NEAR(curve.front().lambda, 1.3, 1e-12);
  EXPECT_NEAR(curve.back().lambda, 0.7, 1e-12);
  const Eigen::Vector2d u1 = sys.u_crit() + 1.3 * frames(a1).n_alpha;
  EXPECT_NEAR(curve.front().u_x, u1.x(), 1e-12);
  EXPECT_NEAR(curve.front().u_y, u1.y(), 1e-12);
  for (const auto& s : curve) {
    const Eigen::Vector2d u(s.u_x, s.u_y);
    ASSERT_NEAR(angular_distance(analytic_equilibrium(sys, u).alpha_star, s.alpha), 0.0, 1e-10);
    const PotentialOutput out = evaluate_full(sys, {VectorXd::Constant(1, s.alpha), u});
    ASSERT_LE(std::abs(out.grad_z(0)), 1e-10);
  }
}

TEST(OptimalControlCurve, NoWorseThanLinearInterpolation) {
  Rng rng(47);
  const double a1 = -kPi / 2, a2 = kPi / 2;
  for (int i = 0; i < 50; ++i) {
    const double l1 = rng.uniform(0.5, 2), l2 = rng.uniform(0.5, 2);
    const OptimalLambda l = optimal_lambda(a1, a2, l1, l2);
    const double opt = qtest::discrete_action(qtest::sample(l, a1, a2, 400), a1, a2);
    const double line = qtest::discrete_action(
        qtest::sample([&](double a) { return l1 + (l2 - l1) * (a - a1) / (a2 - a1); }, a1, a2, 400),
        a1, a2);
    ASSERT_LE(opt, line + 1e-12);
  }
}

TEST(ContactStiffness, ValuesAndMonotonicity) {
  const ContactPendulum::Params p;
  EXPECT_DOUBLE_EQ(contact_stiffness(0.0, p), p.k_min + p.k_max / 2);
  EXPECT_DOUBLE_EQ(contact_stiffness(0.0, p), 5001.0);
  EXPECT_NEAR(contact_stiffness(100.0, p), p.k_min, 1e-9);
  EXPECT_NEAR(contact_stiffness(-100.0, p), p.k_min + p.k_max, 1e-9);
  double prev = contact_stiffness(-0.5, p);
  for (double d = -0.499; d < 0.5; d += 0.001) {
    const double k = contact_stiffness(d, p);
    ASSERT_LT(k, prev);
    prev = k;
  }
}

TEST(InsideOutside, ExamplesAndRays) {
  ContactPendulum::Params p;
  EXPECT_NEAR(inside_outside(p.a, 0.0, p), 0.0, 1e-15);
  EXPECT_EQ(inside_outside(0.0, 0.0, p), -1.0);
  ContactPendulum::Params e = p;
  e.eps = 1.0;
  EXPECT_NEAR(inside_outside(e.a / std::sqrt(2.0), e.b / std::sqrt(2.0), e), 0.0, 1e-15);
  Rng rng(48);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.angle();
    double prev = inside_outside(0.0, 0.0, p);
    for (double r = 0.01; r < 0.6; r += 0.01) {
      const double v = inside_outside(r * std::cos(t), r * std::sin(t), p);
      ASSERT_GE(v, prev);  // saturates far out
      prev = v;
    }
  }
}

TEST(ContactPendulum, RejectsInvalidParameters) {
  ContactPendulum::Params p;
  p.eps = 0.0;
  EXPECT_THROW(ContactPendulum{p}, ConfigError);
  p = {};
  p.k_max = -1;
  EXPECT_THROW(ContactPendulum{p}, ConfigError);
  p = {};
  p.b = 0;
  EXPECT_THROW(ContactPendulum{p}, ConfigError);
}

TEST(ContactPendulum, FarFieldIsWeakSpring) {
  const ContactPendulum sys({});
  const auto& p = sys.params();
  Rng rng(49);
  for (int i = 0; i < 200; ++i) {
    const double alpha = rng.angle();
    const Eigen::Vector2d u = rng.uniform(2.5, 4.0) * frames(rng.angle()).n_alpha;
    const Eigen::Vector2d tip = p.L0 * frames(alpha).n_alpha;
    const double approx = 0.5 * p.mg * p.L0 * std::sin(alpha) + 0.5 * p.k_min * (u - tip).squaredNorm();
    const double w = evaluate_full(sys, {VectorXd::Constant(1, alpha), u}).value;
    ASSERT_NEAR(w, approx, 1e-3 * std::abs(approx));
  }
}

TEST(ContactPendulum, PeriodicInAngle) {
  const ContactPendulum sys({});
  Rng rng(50);
  for (int i = 0; i < 200; ++i) {
    const double alpha = rng.angle();
    const VectorXd u = rng.vector(2, -1.5, 1.5);
    const auto a = evaluate_full(sys, {VectorXd::Constant(1, alpha), u});
    const auto b = evaluate_full(sys, {VectorXd::Constant(1, alpha + 2 * kPi), u});
    ASSERT_NEAR(a.value, b.value, 1e-9 * std::max(1.0, std::abs(a.value)));
    ASSERT_NEAR(a.grad_z(0), b.grad_z(0), 1e-7 * std::max(1.0, std::abs(a.grad_z(0))));
  }
}

TEST(ContactPendulum, BodyCoordinatesOfTip) {
  const ContactPendulum sys({});
  Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const double alpha = rng.angle();
    const Eigen::Vector2d tip = sys.params().L0 * frames(alpha).n_alpha;
    const Eigen::Vector2d q = sys.body_coordinates(alpha, tip);
    ASSERT_NEAR(q.x(), sys.params().L0 / 2, 1e-14);
    ASSERT_NEAR(q.y(), 0.0, 1e-14);
    ASSERT_NEAR(sys.penetration(alpha, tip), 0.0, 1e-12);
  }
}

TEST(Seeds, UniformGridOverCircle) {
  const LinearSpringPendulum sys({});
  const auto seeds = sys.default_seeds(16);
  ASSERT_EQ(seeds.size(), 16u);
  EXPECT_DOUBLE_EQ(seeds.front()(0), -kPi);
  for (std::size_t i = 1; i < seeds.size(); ++i) {
    ASSERT_NEAR(seeds[i](0) - seeds[i - 1](0), kPi / 8, 1e-15);
  }
}
