#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "quasistat/equilibrium.hpp"
#include "quasistat/pendulum.hpp"

namespace qtest {

using quasistat::MatrixXd;
using quasistat::VectorXd;

/// Seeded generator for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double angle() { return uniform(-3.141592653589793, 3.141592653589793); }
  VectorXd vector(int n, double lo, double hi);
  Eigen::Matrix2d rotation();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// W = c.
class ConstantPotential final : public quasistat::PotentialSystem {
 public:
  ConstantPotential(int n, int k, double c) : PotentialSystem(n, k), c_(c) {}
  quasistat::PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  std::string name() const override { return "constant"; }

 private:
  double c_;
};

/// W = 1/2 z'Az + z'Bu + 1/2 u'Cu + 1/6 sum z_i^3 with A symmetric.
class PolynomialPotential final : public quasistat::PotentialSystem {
 public:
  PolynomialPotential(MatrixXd a, MatrixXd b, MatrixXd c, double cubic);
  static PolynomialPotential random(Rng& rng, int n, int k, double cubic);
  quasistat::PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  std::string name() const override { return "polynomial"; }
  const MatrixXd& a() const { return a_; }
  const MatrixXd& b() const { return b_; }
  const MatrixXd& c() const { return c_; }

 private:
  MatrixXd a_, b_, c_;
  double cubic_;
};

/// Wraps a system and adds a constant offset to grad_z only.
class CorruptedGradient final : public quasistat::PotentialSystem {
 public:
  CorruptedGradient(const quasistat::PotentialSystem& base, double offset)
      : PotentialSystem(base.num_states(), base.num_controls()), base_(base), offset_(offset) {}
  quasistat::PotentialOutput evaluate(const VectorXd& z, const VectorXd& u) const override;
  double fiber_distance(const VectorXd& a, const VectorXd& b) const override {
    return base_.fiber_distance(a, b);
  }
  std::string name() const override { return "corrupted"; }

 private:
  const quasistat::PotentialSystem& base_;
  double offset_;
};

/// Stable equilibrium of the linear pendulum with the spring along n_alpha at
/// length L_u, built from the closed form.
quasistat::EquilibriumPoint linear_point(const quasistat::pendulum::LinearSpringPendulum& sys,
                                         double alpha, double L_u);

/// Control on the stable linear-pendulum branch.
Eigen::Vector2d linear_control(const quasistat::pendulum::LinearSpringPendulum& sys, double alpha,
                               double L_u);

/// Normalized pendulum action, integral of lambda'^2 + (lambda - 1)^2 over a
/// uniform alpha grid, with samples lambda[0..n].
double discrete_action(const std::vector<double>& lambda, double alpha1, double alpha2);

/// Samples f on n+1 uniform points of [alpha1, alpha2].
std::vector<double> sample(const std::function<double(double)>& f, double alpha1, double alpha2,
                           int n);

double max_abs(const MatrixXd& m);

}  // namespace qtest
