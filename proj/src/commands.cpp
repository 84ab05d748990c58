#include "quasistat/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "quasistat/metric.hpp"
#include "quasistat/verify.hpp"

namespace quasistat::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  out << std::setprecision(17);
  return out;
}

BottomGraph bottom_from(const RunConfig& config) {
  return build_bottom_grid(config.bounds, config.grid, config.diagonals);
}

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const InvalidBounds& e) {
    log << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const DegenerateBoundary& e) {
    log << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const DimensionError& e) {
    log << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const NoPath& e) {
    log << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

/// Fraction of fibers that produced nothing usable; above 10% the run fails.
bool too_many_failures(std::size_t failed, std::size_t total, std::ostream& log) {
  if (failed == 0) return false;
  log << "warning: " << failed << " of " << total << " fibers produced no equilibrium\n";
  return 10 * failed > total;
}

std::size_t pick_node(const PotentialSystem& system, const TopGraph& graph, const Endpoint& e) {
  if (e.u.size() != system.num_controls()) {
    throw DimensionError("endpoint control has the wrong dimension");
  }
  std::optional<VectorXd> z;
  if (e.alpha) z = VectorXd::Constant(1, *e.alpha);
  return nearest_node(system, graph, e.u, z);
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("endpoint must look like ux,uy[,alpha], got '" + text + "'");
    }
  }
  if (values.size() != 2 && values.size() != 3) {
    throw ConfigError("endpoint must look like ux,uy[,alpha], got '" + text + "'");
  }
  Endpoint e;
  e.u = VectorXd(2);
  e.u << values[0], values[1];
  if (values.size() == 3) e.alpha = values[2];
  return e;
}

int cmd_sample(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto system = make_system(config);
    const BottomGraph bottom = bottom_from(config);
    const kernels::FiberSet fibers =
        config.lift.parallel ? kernels::omp::solve_fibers(*system, bottom, config.lift.solver)
                             : kernels::serial::solve_fibers(*system, bottom, config.lift.solver);

    std::size_t failed = 0;
    std::size_t rows = 0;
    std::ofstream out = open_output(config, "equilibria.csv");
    out << "u_x,u_y,z_star,energy,stability,det_hess_zz\n";
    for (const auto& fiber : fibers) {
      if (fiber.empty()) ++failed;
      for (const EquilibriumPoint& p : fiber) {
        out << p.u(0) << ',' << p.u(1) << ',' << p.z_star(0) << ',' << p.energy << ','
            << to_string(p.stability) << ',' << p.det_hess_zz << '\n';
        ++rows;
      }
    }
    log << "sampled " << fibers.size() << " fibers, " << rows << " equilibria\n";
    return too_many_failures(failed, fibers.size(), log) ? kSolverFailure : kSuccess;
  });
}

int cmd_plan(const RunConfig& config, const Endpoint& start, const Endpoint& goal,
             std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto system = make_system(config);
    const BottomGraph bottom = bottom_from(config);
    const TopGraph graph = lift(*system, bottom, config.lift);

    std::size_t failed = 0;
    for (const auto& ids : graph.fibers) failed += ids.empty() ? 1 : 0;
    if (too_many_failures(failed, graph.fibers.size(), log)) return int(kSolverFailure);
    if (graph.nodes.empty()) throw NoPath("no stable equilibria in the sampled region", 0);

    const std::size_t s = pick_node(*system, graph, start);
    const std::size_t g = pick_node(*system, graph, goal);
    const MultiBranchPath path = shortest_path(graph, s, g, config.switch_penalty);

    std::vector<EquilibriumPoint> points;
    for (std::size_t id : path.nodes) points.push_back(graph.nodes[id].equilibrium);

    // Cumulative cost follows the stored edge weights plus any switch penalty.
    const auto out_edges = graph.out_edges();
    std::ofstream out = open_output(config, "path.csv");
    out << "step,node,u_x,u_y,z,cumulative_cost,switch\n";
    double cumulative = 0.0;
    std::size_t marker = 0;
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
      const bool switched = marker < path.switch_markers.size() && path.switch_markers[marker] == i;
      if (switched) ++marker;
      const EquilibriumPoint& p = points[i];
      out << i << ',' << path.nodes[i] << ',' << p.u(0) << ',' << p.u(1) << ',' << p.z_star(0)
          << ',' << cumulative << ',' << (switched ? 1 : 0) << '\n';
      if (i + 1 < path.nodes.size()) {
        for (std::size_t e : out_edges[path.nodes[i]]) {
          const TopEdge& edge = graph.edges[e];
          if (edge.to != path.nodes[i + 1]) continue;
          cumulative += edge.weight + (edge.branch_switch ? config.switch_penalty : 0.0);
          break;
        }
      }
    }

    const double length = points.size() >= 2 ? path_length(points) : 0.0;
    std::ofstream summary = open_output(config, "summary.txt");
    summary << "cost=" << path.total_cost << " length=" << length
            << " switches=" << path.switch_markers.size() << " nodes=" << path.nodes.size()
            << '\n';
    log << "path: " << path.nodes.size() << " nodes, cost " << path.total_cost << ", "
        << path.switch_markers.size() << " branch switches\n";
    return int(kSuccess);
  });
}

int cmd_pendulum_analytic(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const pendulum::LinearSpringPendulum sys(config.linear);
    const auto curve = pendulum::optimal_control_curve(sys, config.alpha1, config.alpha2,
                                                       config.lambda1 * config.linear.L0,
                                                       config.lambda2 * config.linear.L0,
                                                       config.samples);
    std::ofstream out = open_output(config, "pendulum_curve.csv");
    out << "alpha,lambda_u,u_x,u_y\n";
    for (const auto& s : curve) {
      out << s.alpha << ',' << s.lambda << ',' << s.u_x << ',' << s.u_y << '\n';
    }
    log << "wrote " << curve.size() << " curve samples\n";
    return int(kSuccess);
  });
}

int cmd_check(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto system = make_system(config);
    const auto rows = run_checks(*system, config.lift.solver);
    print_check_table(rows, log);
    for (const auto& r : rows) {
      if (!r.passed) return int(kVerificationFailure);
    }
    return int(kSuccess);
  });
}

int cmd_export_graph(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    validate(config);
    const auto system = make_system(config);
    const TopGraph graph = lift(*system, bottom_from(config), config.lift);
    std::ofstream out = open_output(config, "topgraph.txt");
    export_graph(graph, out);
    log << "exported " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
    return int(kSuccess);
  });
}

}  // namespace quasistat::cli
