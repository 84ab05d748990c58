#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <string>

#include "quasistat/graph.hpp"
#include "quasistat/pendulum.hpp"

namespace quasistat {

enum class SystemKind { LinearPendulum, ContactPendulum };

/// Seeds per fiber for the contact model unless `seeds` is given. The
/// in-contact basins are narrower than the default seed spacing.
inline constexpr int kContactSeedCount = 64;

/// Everything a CLI run needs. Parsed from `key = value` lines; `#` starts a
/// comment.
struct RunConfig {
  SystemKind system = SystemKind::ContactPendulum;
  pendulum::LinearSpringPendulum::Params linear;
  pendulum::ContactPendulum::Params contact;

  std::array<Interval, 2> bounds{{{-1.5, 1.5}, {-1.5, 1.5}}};
  std::array<int, 2> grid{31, 31};
  bool diagonals = false;

  LiftOptions lift = [] {
    LiftOptions o;
    o.solver.seed_count = kContactSeedCount;
    return o;
  }();
  double switch_penalty = 0.0;
  std::string out_dir = ".";

  // pendulum-analytic
  double alpha1 = -std::numbers::pi / 2;
  double alpha2 = std::numbers::pi / 2;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int samples = 101;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Throws ConfigError on the first invalid parameter.
void validate(const RunConfig& config);

/// Parses "NxM".
std::array<int, 2> parse_grid(const std::string& text);

std::unique_ptr<PotentialSystem> make_system(const RunConfig& config);

}  // namespace quasistat
