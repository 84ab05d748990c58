#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "quasistat/config.hpp"

namespace quasistat::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kSolverFailure = 2,
  kVerificationFailure = 3,
};

/// A requested endpoint `ux,uy[,alpha]`.
struct Endpoint {
  VectorXd u;
  std::optional<double> alpha;
};

Endpoint parse_endpoint(const std::string& text);

/// Writes <out>/equilibria.csv.
int cmd_sample(const RunConfig& config, std::ostream& log);

/// Writes <out>/path.csv and <out>/summary.txt.
int cmd_plan(const RunConfig& config, const Endpoint& start, const Endpoint& goal,
             std::ostream& log);

/// Writes <out>/pendulum_curve.csv.
int cmd_pendulum_analytic(const RunConfig& config, std::ostream& log);

/// Prints the check table to `log`.
int cmd_check(const RunConfig& config, std::ostream& log);

/// Writes <out>/topgraph.txt.
int cmd_export_graph(const RunConfig& config, std::ostream& log);

}  // namespace quasistat::cli
