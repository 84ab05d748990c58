#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "quasistat/equilibrium.hpp"

namespace quasistat {

struct Interval {
  double lo;
  double hi;
};

/// Control-space sampling: vertices and undirected adjacency.
struct BottomGraph {
  std::vector<VectorXd> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j

  /// Neighbor lists, ascending.
  std::vector<std::vector<std::size_t>> adjacency() const;
};

/// Regular grid with axis neighbors, plus all diagonal neighbors when
/// `diagonals` is set. An axis with resolution 1 holds a single sample at
/// the midpoint of its interval.
BottomGraph build_bottom_grid(std::span<const Interval> bounds, std::span<const int> resolution,
                              bool diagonals = false);

struct TopNode {
  EquilibriumPoint equilibrium;
  std::size_t bottom_index = 0;
  std::size_t node_id = 0;
};

struct TopEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
  /// Fiber distance between the target and the source's tangent prediction.
  double forward_residual = 0.0;
  /// Same, predicted back from the target toward the source.
  double backward_residual = 0.0;
  /// The connection is one-sided: the target's own branch does not continue
  /// back into the source, so traversing the edge changes branch.
  bool branch_switch = false;
};

/// Multi-valued lift of a bottom graph: stable equilibria as nodes, directed
/// edges weighted by the squared-Hessian cost evaluated at the source.
struct TopGraph {
  std::vector<TopNode> nodes;
  std::vector<TopEdge> edges;  // sorted by (from, to)
  /// Node ids per bottom vertex.
  std::vector<std::vector<std::size_t>> fibers;
  /// Unstable equilibria per bottom vertex, kept for plotting only.
  std::vector<EquilibriumPoint> unstable;
  double match_threshold = std::numeric_limits<double>::infinity();

  /// Edge indices leaving each node.
  std::vector<std::vector<std::size_t>> out_edges() const;
};

struct LiftOptions {
  SolverOptions solver;
  /// Fixed match threshold; <= 0 selects it from the sampled fibers.
  double match_threshold = 0.0;
  /// Automatic threshold: factor times the 90th percentile of the tangent
  /// prediction residual to the closest candidate, over all stable nodes and
  /// bottom neighbours, floored at 1e-3.
  double match_factor = 3.0;
  /// Average the source and target quadratic forms instead of using the
  /// source alone.
  bool symmetric_weights = false;
  bool keep_unstable = false;
  bool parallel = true;
};

/// Best same-branch continuation of `from` among `candidates` (all over one
/// control u_j): the candidate closest to z* + tangent_step(u_j - u), if that
/// distance is within `threshold`. Ties go to the lexicographically smaller
/// fiber coordinate. Critical sources never match.
std::optional<std::size_t> match_branch(const PotentialSystem& system, const TopNode& from,
                                        std::span<const TopNode> candidates, double threshold);

/// Threshold rule used by lift() when none is given. Needs `graph.nodes` and
/// `graph.fibers`. Infinite when no node has a neighbouring fiber.
double auto_match_threshold(const PotentialSystem& system, const TopGraph& graph,
                            const std::vector<std::vector<std::size_t>>& adjacency,
                            double factor);

TopGraph lift(const PotentialSystem& system, const BottomGraph& bottom,
              const LiftOptions& options = {});

struct MultiBranchPath {
  std::vector<std::size_t> nodes;
  double total_cost = 0.0;
  /// Positions i in `nodes` such that the step nodes[i] -> nodes[i+1] changes branch.
  std::vector<std::size_t> switch_markers;
};

/// Dijkstra over the directed nonnegative weights. A constant penalty can be
/// charged for each branch-switching edge. Throws NoPath.
MultiBranchPath shortest_path(const TopGraph& graph, std::size_t start, std::size_t goal,
                              double switch_penalty = 0.0);

/// Text format, header `quasistat-topgraph v1`, 17 significant digits. A
/// `match_threshold <value>` record follows the header.
void export_graph(const TopGraph& graph, std::ostream& os);

/// Reads nodes and edges back. Derivative caches, edge residuals and switch
/// flags are recomputed from `system`. A positive `options.match_threshold`
/// overrides the stored one.
TopGraph import_graph(std::istream& is, const PotentialSystem& system,
                      const LiftOptions& options = {});

/// Nearest node by control distance, then by fiber distance to `z` if given.
std::size_t nearest_node(const PotentialSystem& system, const TopGraph& graph,
                         const VectorXd& u, const std::optional<VectorXd>& z = std::nullopt);

namespace kernels {

/// Per-vertex equilibrium sets; index i holds all equilibria over vertex i.
using FiberSet = std::vector<std::vector<EquilibriumPoint>>;
/// Outgoing edges per node, each list sorted by target id.
using EdgeLists = std::vector<std::vector<TopEdge>>;

/// Directed edges leaving one node toward every bottom neighbour.
std::vector<TopEdge> edges_from_node(const PotentialSystem& system, const TopGraph& graph,
                                     const std::vector<std::vector<std::size_t>>& adjacency,
                                     std::size_t node, const LiftOptions& options);

namespace serial {
FiberSet solve_fibers(const PotentialSystem& system, const BottomGraph& bottom,
                      const SolverOptions& options);
EdgeLists build_edges(const PotentialSystem& system, const TopGraph& graph,
                      const BottomGraph& bottom, const LiftOptions& options);
}  // namespace serial

namespace omp {
FiberSet solve_fibers(const PotentialSystem& system, const BottomGraph& bottom,
                      const SolverOptions& options);
EdgeLists build_edges(const PotentialSystem& system, const TopGraph& graph,
                      const BottomGraph& bottom, const LiftOptions& options);
}  // namespace omp

}  // namespace kernels

}  // namespace quasistat
