// Reference implementations of the lift kernels. The OpenMP versions in
// kernels_omp.cpp must produce bit-identical results.

#include "quasistat/graph.hpp"

namespace quasistat::kernels::serial {

FiberSet solve_fibers(const PotentialSystem& system, const BottomGraph& bottom,
                      const SolverOptions& options) {
  const auto seeds = system.default_seeds(options.seed_count);
  FiberSet fibers(bottom.vertices.size());
  for (std::size_t v = 0; v < bottom.vertices.size(); ++v) {
    fibers[v] = find_equilibria(system, bottom.vertices[v], seeds, options);
  }
  return fibers;
}

EdgeLists build_edges(const PotentialSystem& system, const TopGraph& graph,
                      const BottomGraph& bottom, const LiftOptions& options) {
  const auto adjacency = bottom.adjacency();
  EdgeLists lists(graph.nodes.size());
  for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
    lists[n] = edges_from_node(system, graph, adjacency, n, options);
  }
  return lists;
}

}  // namespace quasistat::kernels::serial
