#include <exception>

#include "quasistat/graph.hpp"

namespace quasistat::kernels::omp {

namespace {

// Exceptions may not escape an OpenMP region; keep the first one and rethrow.
class ExceptionSlot {
 public:
  void capture() {
#pragma omp critical(quasistat_exception_slot)
    {
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

FiberSet solve_fibers(const PotentialSystem& system, const BottomGraph& bottom,
                      const SolverOptions& options) {
  const auto seeds = system.default_seeds(options.seed_count);
  const auto count = static_cast<long>(bottom.vertices.size());
  FiberSet fibers(bottom.vertices.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 8)
  for (long v = 0; v < count; ++v) {
    try {
      fibers[v] = find_equilibria(system, bottom.vertices[v], seeds, options);
    } catch (...) {
      slot.capture();
    }
  }
  slot.rethrow();
  return fibers;
}

EdgeLists build_edges(const PotentialSystem& system, const TopGraph& graph,
                      const BottomGraph& bottom, const LiftOptions& options) {
  const auto adjacency = bottom.adjacency();
  const auto count = static_cast<long>(graph.nodes.size());
  EdgeLists lists(graph.nodes.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 16)
  for (long n = 0; n < count; ++n) {
    try {
      lists[n] = edges_from_node(system, graph, adjacency, static_cast<std::size_t>(n), options);
    } catch (...) {
      slot.capture();
    }
  }
  slot.rethrow();
  return lists;
}

}  // namespace quasistat::kernels::omp
