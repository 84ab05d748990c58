#include "quasistat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace quasistat {

namespace {

void require_dims(const PotentialSystem& system, const VectorXd& z, const VectorXd& u) {
  if (z.size() != system.num_states() || u.size() != system.num_controls()) {
    throw DimensionError(system.name() + ": expected (N, K) = (" +
                         std::to_string(system.num_states()) + ", " +
                         std::to_string(system.num_controls()) + "), got (" +
                         std::to_string(z.size()) + ", " + std::to_string(u.size()) + ")");
  }
}

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

BlockCheck compare_block(std::string name, const MatrixXd& analytic, const MatrixXd& fd,
                         double noise_abs) {
  BlockCheck check;
  check.block = std::move(name);
  const double scale = std::max(max_abs(analytic), max_abs(fd));
  const double diff = max_abs(analytic - fd);
  if (scale == 0.0) {
    check.rel_error = 0.0;
    check.noise = 0.0;
    return check;
  }
  check.rel_error = diff / scale;
  check.noise = noise_abs / scale;
  check.reliable = check.noise < 1e-6;
  return check;
}

}  // namespace

bool PotentialOutput::all_finite() const {
  return std::isfinite(value) && grad_z.allFinite() && grad_u.allFinite() &&
         hess_zz.allFinite() && hess_uz.allFinite() && hess_uu.allFinite();
}

PotentialSystem::PotentialSystem(int num_states, int num_controls)
    : num_states_(num_states), num_controls_(num_controls) {
  if (num_states <= 0 || num_controls <= 0) {
    throw DimensionError("potential system needs at least one state and one control");
  }
}

double PotentialSystem::fiber_distance(const VectorXd& z1, const VectorXd& z2) const {
  return (z1 - z2).norm();
}

std::vector<VectorXd> PotentialSystem::default_seeds(int count) const {
  // Unit box per state coordinate; systems with a natural range override this.
  std::vector<VectorXd> seeds;
  const int n = std::max(count, 1);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1);
    seeds.push_back(VectorXd::Constant(num_states(), t));
  }
  return seeds;
}

LinearControlChange::LinearControlChange(const PotentialSystem& base, MatrixXd jacobian)
    : PotentialSystem(base.num_states(), base.num_controls()),
      base_(base),
      jacobian_(std::move(jacobian)) {
  if (jacobian_.rows() != base.num_controls() || jacobian_.cols() != base.num_controls()) {
    throw DimensionError("control change must be K x K");
  }
}

PotentialOutput LinearControlChange::evaluate(const VectorXd& z, const VectorXd& u) const {
  PotentialOutput out = base_.evaluate(z, jacobian_ * u);
  out.grad_u = jacobian_.transpose() * out.grad_u;
  out.hess_uz = jacobian_.transpose() * out.hess_uz;
  out.hess_uu = jacobian_.transpose() * out.hess_uu * jacobian_;
  return out;
}

double LinearControlChange::fiber_distance(const VectorXd& z1, const VectorXd& z2) const {
  return base_.fiber_distance(z1, z2);
}

VectorXd LinearControlChange::canonical_state(const VectorXd& z) const {
  return base_.canonical_state(z);
}

std::vector<VectorXd> LinearControlChange::default_seeds(int count) const {
  return base_.default_seeds(count);
}

std::string LinearControlChange::name() const { return base_.name() + "+control-change"; }

PotentialOutput evaluate_full(const PotentialSystem& system, const Configuration& cfg) {
  require_dims(system, cfg.z, cfg.u);
  if (!cfg.z.allFinite() || !cfg.u.allFinite()) {
    throw EvaluationError(system.name() + ": non-finite configuration");
  }
  PotentialOutput out = system.evaluate(cfg.z, cfg.u);
  const int n = system.num_states();
  const int k = system.num_controls();
  if (out.grad_z.size() != n || out.grad_u.size() != k || out.hess_zz.rows() != n ||
      out.hess_zz.cols() != n || out.hess_uz.rows() != k || out.hess_uz.cols() != n ||
      out.hess_uu.rows() != k || out.hess_uu.cols() != k) {
    throw DimensionError(system.name() + ": derivative blocks have wrong shape");
  }
  if (!out.all_finite()) {
    throw EvaluationError(system.name() + ": non-finite potential output");
  }
  return out;
}

double fiber_distance(const PotentialSystem& system, const VectorXd& z1, const VectorXd& z2) {
  if (z1.size() != system.num_states() || z2.size() != system.num_states()) {
    throw DimensionError(system.name() + ": fiber distance needs two length-N states");
  }
  return system.fiber_distance(z1, z2);
}

DerivativeReport fd_check_derivatives(const PotentialSystem& system, const Configuration& cfg,
                                      double step) {
  if (!(step > 0.0)) {
    throw Error("fd_check_derivatives: step must be positive");
  }
  const PotentialOutput ref = evaluate_full(system, cfg);
  const int n = system.num_states();
  const int k = system.num_controls();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  VectorXd fd_grad_z(n);
  VectorXd fd_grad_u(k);
  MatrixXd fd_hess_zz(n, n);
  MatrixXd fd_hess_uz(k, n);  // d grad_z / d u
  MatrixXd fd_hess_zu(n, k);  // d grad_u / d z, must equal hess_uz^T
  MatrixXd fd_hess_uu(k, k);

  double value_scale = std::abs(ref.value);
  double grad_z_scale = ref.grad_z.size() ? ref.grad_z.cwiseAbs().maxCoeff() : 0.0;
  double grad_u_scale = ref.grad_u.size() ? ref.grad_u.cwiseAbs().maxCoeff() : 0.0;

  for (int i = 0; i < n; ++i) {
    Configuration plus = cfg;
    Configuration minus = cfg;
    plus.z(i) += step;
    minus.z(i) -= step;
    const PotentialOutput p = evaluate_full(system, plus);
    const PotentialOutput m = evaluate_full(system, minus);
    fd_grad_z(i) = (p.value - m.value) / (2.0 * step);
    fd_hess_zz.col(i) = (p.grad_z - m.grad_z) / (2.0 * step);
    fd_hess_zu.row(i) = ((p.grad_u - m.grad_u) / (2.0 * step)).transpose();
    value_scale = std::max({value_scale, std::abs(p.value), std::abs(m.value)});
    grad_z_scale = std::max({grad_z_scale, p.grad_z.cwiseAbs().maxCoeff(),
                             m.grad_z.cwiseAbs().maxCoeff()});
    grad_u_scale = std::max({grad_u_scale, p.grad_u.cwiseAbs().maxCoeff(),
                             m.grad_u.cwiseAbs().maxCoeff()});
  }
  for (int j = 0; j < k; ++j) {
    Configuration plus = cfg;
    Configuration minus = cfg;
    plus.u(j) += step;
    minus.u(j) -= step;
    const PotentialOutput p = evaluate_full(system, plus);
    const PotentialOutput m = evaluate_full(system, minus);
    fd_grad_u(j) = (p.value - m.value) / (2.0 * step);
    fd_hess_uz.row(j) = ((p.grad_z - m.grad_z) / (2.0 * step)).transpose();
    fd_hess_uu.col(j) = (p.grad_u - m.grad_u) / (2.0 * step);
    value_scale = std::max({value_scale, std::abs(p.value), std::abs(m.value)});
    grad_z_scale = std::max({grad_z_scale, p.grad_z.cwiseAbs().maxCoeff(),
                             m.grad_z.cwiseAbs().maxCoeff()});
    grad_u_scale = std::max({grad_u_scale, p.grad_u.cwiseAbs().maxCoeff(),
                             m.grad_u.cwiseAbs().maxCoeff()});
  }

  // Round-off in a central difference is about eps * |f| / h.
  const double value_noise = 4.0 * eps * value_scale / step;
  const double grad_z_noise = 4.0 * eps * grad_z_scale / step;
  const double grad_u_noise = 4.0 * eps * grad_u_scale / step;

  DerivativeReport report;
  report.blocks.push_back(compare_block("grad_z", ref.grad_z, fd_grad_z, value_noise));
  report.blocks.push_back(compare_block("grad_u", ref.grad_u, fd_grad_u, value_noise));
  report.blocks.push_back(compare_block("hess_zz", ref.hess_zz, fd_hess_zz, grad_z_noise));
  report.blocks.push_back(compare_block("hess_uz", ref.hess_uz, fd_hess_uz, grad_z_noise));
  report.blocks.push_back(
      compare_block("hess_zu", ref.hess_uz.transpose(), fd_hess_zu, grad_u_noise));
  report.blocks.push_back(compare_block("hess_uu", ref.hess_uu, fd_hess_uu, grad_u_noise));
  return report;
}

double DerivativeReport::max_rel_error() const {
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.rel_error);
  return worst;
}

bool DerivativeReport::passed(double tol) const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [tol](const BlockCheck& b) { return !b.reliable || b.rel_error < tol; });
}

bool DerivativeReport::all_reliable() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const BlockCheck& b) { return b.reliable; });
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back because of rounding.
  if (wrapped >= std::numbers::pi) wrapped -= two_pi;
  return wrapped;
}

double angular_distance(double a, double b) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

}  // namespace quasistat
