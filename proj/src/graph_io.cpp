#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "quasistat/graph.hpp"
#include "quasistat/metric.hpp"

namespace quasistat {

namespace {

constexpr const char* kHeader = "quasistat-topgraph v1";

double parse_double(std::istringstream& in, const std::string& line) {
  std::string token;
  if (!(in >> token)) throw Error("graph file: truncated record: " + line);
  std::size_t used = 0;
  const double v = std::stod(token, &used);
  if (used != token.size()) throw Error("graph file: bad number '" + token + "'");
  return v;
}

std::size_t parse_index(std::istringstream& in, const std::string& line) {
  std::string token;
  if (!(in >> token)) throw Error("graph file: truncated record: " + line);
  std::size_t used = 0;
  const unsigned long long v = std::stoull(token, &used);
  if (used != token.size()) throw Error("graph file: bad index '" + token + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

void export_graph(const TopGraph& graph, std::ostream& os) {
  const auto old_flags = os.flags();
  const auto old_precision = os.precision();
  os << std::defaultfloat << std::setprecision(17);
  os << kHeader << '\n';
  os << "match_threshold " << graph.match_threshold << '\n';
  for (const TopNode& node : graph.nodes) {
    const EquilibriumPoint& eq = node.equilibrium;
    os << "node " << node.node_id << ' ' << node.bottom_index;
    for (double v : eq.u) os << ' ' << v;
    for (double v : eq.z_star) os << ' ' << v;
    os << ' ' << eq.energy << ' ' << to_string(eq.stability) << '\n';
  }
  for (const TopEdge& e : graph.edges) {
    os << "edge " << e.from << ' ' << e.to << ' ' << e.weight << '\n';
  }
  os.flags(old_flags);
  os.precision(old_precision);
  if (!os) throw Error("graph export: write failed");
}

TopGraph import_graph(std::istream& is, const PotentialSystem& system,
                      const LiftOptions& options) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw Error("graph file: missing '" + std::string(kHeader) + "' header");
  }
  const int k = system.num_controls();
  const int n = system.num_states();
  TopGraph graph;
  std::vector<TopEdge> edges;

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    if (kind == "node") {
      TopNode node;
      node.node_id = parse_index(in, line);
      node.bottom_index = parse_index(in, line);
      VectorXd u(k);
      VectorXd z(n);
      for (int i = 0; i < k; ++i) u(i) = parse_double(in, line);
      for (int i = 0; i < n; ++i) z(i) = parse_double(in, line);
      const double energy = parse_double(in, line);
      std::string tag;
      if (!(in >> tag)) throw Error("graph file: truncated record: " + line);
      if (node.node_id != graph.nodes.size()) {
        throw Error("graph file: node ids must be consecutive from 0");
      }
      node.equilibrium = equilibrium_at(system, z, u, options.solver.crit_threshold);
      node.equilibrium.energy = energy;
      node.equilibrium.stability = stability_from_string(tag);
      if (graph.fibers.size() <= node.bottom_index) graph.fibers.resize(node.bottom_index + 1);
      graph.fibers[node.bottom_index].push_back(node.node_id);
      graph.nodes.push_back(std::move(node));
    } else if (kind == "match_threshold") {
      std::string token;
      if (!(in >> token)) throw Error("graph file: truncated record: " + line);
      graph.match_threshold = std::stod(token);
    } else if (kind == "edge") {
      TopEdge e;
      e.from = parse_index(in, line);
      e.to = parse_index(in, line);
      e.weight = parse_double(in, line);
      edges.push_back(e);
    } else {
      throw Error("graph file: unknown record '" + kind + "'");
    }
  }

  if (options.match_threshold > 0.0) graph.match_threshold = options.match_threshold;

  for (TopEdge& e : edges) {
    if (e.from >= graph.nodes.size() || e.to >= graph.nodes.size()) {
      throw Error("graph file: edge references an unknown node");
    }
    const EquilibriumPoint& src = graph.nodes[e.from].equilibrium;
    const EquilibriumPoint& dst = graph.nodes[e.to].equilibrium;
    const VectorXd du = dst.u - src.u;
    if (src.stability != Stability::Critical && dst.stability != Stability::Critical) {
      e.forward_residual =
          system.fiber_distance(dst.z_star, src.z_star + tangent_step(src, du));
      e.backward_residual =
          system.fiber_distance(src.z_star, dst.z_star + tangent_step(dst, -du));
      e.branch_switch = e.backward_residual > graph.match_threshold;
    }
  }
  graph.edges = std::move(edges);
  return graph;
}

}  // namespace quasistat
