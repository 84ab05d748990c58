#include "quasistat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "quasistat/metric.hpp"

namespace quasistat {

std::vector<std::vector<std::size_t>> BottomGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(vertices.size());
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

BottomGraph build_bottom_grid(std::span<const Interval> bounds, std::span<const int> resolution,
                              bool diagonals) {
  if (bounds.empty() || bounds.size() != resolution.size()) {
    throw InvalidBounds("grid needs one interval and one resolution per control axis");
  }
  const std::size_t dims = bounds.size();
  for (std::size_t d = 0; d < dims; ++d) {
    const auto [lo, hi] = bounds[d];
    if (!std::isfinite(lo) || !std::isfinite(hi) || resolution[d] < 1) {
      throw InvalidBounds("grid axis " + std::to_string(d) + " is degenerate");
    }
    if (resolution[d] > 1 && !(lo < hi)) {
      throw InvalidBounds("grid axis " + std::to_string(d) + " needs lo < hi");
    }
  }

  std::vector<std::size_t> stride(dims, 1);
  std::size_t count = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    stride[d] = count;
    count *= static_cast<std::size_t>(resolution[d]);
  }

  auto coordinate = [&](std::size_t d, int i) {
    const auto [lo, hi] = bounds[d];
    if (resolution[d] == 1) return 0.5 * (lo + hi);
    if (i == resolution[d] - 1) return hi;
    return lo + (hi - lo) * i / (resolution[d] - 1);
  };

  BottomGraph g;
  g.vertices.reserve(count);
  std::vector<int> idx(dims, 0);
  for (std::size_t v = 0; v < count; ++v) {
    std::size_t rem = v;
    VectorXd u(static_cast<Eigen::Index>(dims));
    for (std::size_t d = 0; d < dims; ++d) {
      idx[d] = static_cast<int>(rem % resolution[d]);
      rem /= resolution[d];
      u(static_cast<Eigen::Index>(d)) = coordinate(d, idx[d]);
    }
    g.vertices.push_back(std::move(u));
  }

  // Neighbour offsets in {-1, 0, 1}^dims, excluding the origin.
  std::vector<std::vector<int>> offsets;
  std::vector<int> off(dims, -1);
  while (true) {
    const auto nonzero = std::count_if(off.begin(), off.end(), [](int o) { return o != 0; });
    if (nonzero == 1 || (diagonals && nonzero > 1)) offsets.push_back(off);
    std::size_t d = 0;
    while (d < dims && off[d] == 1) off[d++] = -1;
    if (d == dims) break;
    ++off[d];
  }

  for (std::size_t v = 0; v < count; ++v) {
    std::size_t rem = v;
    for (std::size_t d = 0; d < dims; ++d) {
      idx[d] = static_cast<int>(rem % resolution[d]);
      rem /= resolution[d];
    }
    for (const auto& o : offsets) {
      std::size_t w = 0;
      bool inside = true;
      for (std::size_t d = 0; d < dims && inside; ++d) {
        const int n = idx[d] + o[d];
        inside = n >= 0 && n < resolution[d];
        w += static_cast<std::size_t>(n) * stride[d];
      }
      if (inside && w > v) g.edges.emplace_back(v, w);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<std::vector<std::size_t>> TopGraph::out_edges() const {
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].from].push_back(e);
  return out;
}

namespace {

// Index of the candidate closest to `predicted`, within `threshold`.
template <typename StateAt>
std::optional<std::size_t> closest_candidate(const PotentialSystem& system,
                                             const VectorXd& predicted, std::size_t count,
                                             StateAt&& state_at, double threshold) {
  std::optional<std::size_t> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < count; ++c) {
    const VectorXd& z = state_at(c);
    const double d = system.fiber_distance(z, predicted);
    if (d > threshold) continue;
    bool better = d < best_distance;
    if (!better && d == best_distance && best) {
      const VectorXd& zb = state_at(*best);
      better = std::lexicographical_compare(z.begin(), z.end(), zb.begin(), zb.end());
    }
    if (better) {
      best = c;
      best_distance = d;
    }
  }
  return best;
}

}  // namespace

std::optional<std::size_t> match_branch(const PotentialSystem& system, const TopNode& from,
                                        std::span<const TopNode> candidates, double threshold) {
  if (candidates.empty() || from.equilibrium.stability == Stability::Critical) return std::nullopt;
  const VectorXd predicted =
      from.equilibrium.z_star +
      tangent_step(from.equilibrium, candidates.front().equilibrium.u - from.equilibrium.u);
  return closest_candidate(
      system, predicted, candidates.size(),
      [&](std::size_t c) -> const VectorXd& { return candidates[c].equilibrium.z_star; },
      threshold);
}

double auto_match_threshold(const PotentialSystem& system, const TopGraph& graph,
                            const std::vector<std::vector<std::size_t>>& adjacency,
                            double factor) {
  std::vector<double> residuals;
  for (const TopNode& node : graph.nodes) {
    if (node.equilibrium.stability == Stability::Critical) continue;
    const TangentMap map = tangent_map(node.equilibrium);
    for (std::size_t j : adjacency[node.bottom_index]) {
      const auto& fiber = graph.fibers[j];
      if (fiber.empty()) continue;
      const VectorXd predicted =
          node.equilibrium.z_star +
          map.apply(graph.nodes[fiber.front()].equilibrium.u - node.equilibrium.u);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t id : fiber) {
        best = std::min(best, system.fiber_distance(graph.nodes[id].equilibrium.z_star, predicted));
      }
      residuals.push_back(best);
    }
  }
  if (residuals.empty()) return std::numeric_limits<double>::infinity();
  const auto q = residuals.begin() + static_cast<std::ptrdiff_t>(0.9 * (residuals.size() - 1));
  std::nth_element(residuals.begin(), q, residuals.end());
  return std::max(1e-3, factor * *q);
}

namespace kernels {

std::vector<TopEdge> edges_from_node(const PotentialSystem& system, const TopGraph& graph,
                                     const std::vector<std::vector<std::size_t>>& adjacency,
                                     std::size_t node, const LiftOptions& options) {
  std::vector<TopEdge> out;
  const TopNode& src = graph.nodes[node];
  if (src.equilibrium.stability == Stability::Critical) return out;

  const TangentMap src_map = tangent_map(src.equilibrium);
  const MatrixXd src_g2 = squared_hessian(src.equilibrium);

  for (std::size_t j : adjacency[src.bottom_index]) {
    const auto& fiber = graph.fibers[j];
    if (fiber.empty()) continue;
    const VectorXd du = graph.nodes[fiber.front()].equilibrium.u - src.equilibrium.u;
    const VectorXd predicted = src.equilibrium.z_star + src_map.apply(du);
    const auto pick = closest_candidate(
        system, predicted, fiber.size(),
        [&](std::size_t c) -> const VectorXd& { return graph.nodes[fiber[c]].equilibrium.z_star; },
        graph.match_threshold);
    if (!pick) continue;

    const TopNode& dst = graph.nodes[fiber[*pick]];
    TopEdge e;
    e.from = node;
    e.to = dst.node_id;
    e.forward_residual = system.fiber_distance(dst.equilibrium.z_star, predicted);
    const VectorXd back = dst.equilibrium.z_star + tangent_step(dst.equilibrium, -du);
    e.backward_residual = system.fiber_distance(src.equilibrium.z_star, back);
    e.branch_switch = e.backward_residual > graph.match_threshold;
    e.weight = quadratic_cost(src_g2, du);
    if (options.symmetric_weights) {
      e.weight = 0.5 * (e.weight + quadratic_cost(squared_hessian(dst.equilibrium), du));
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(),
            [](const TopEdge& a, const TopEdge& b) { return a.to < b.to; });
  return out;
}

}  // namespace kernels

TopGraph lift(const PotentialSystem& system, const BottomGraph& bottom,
              const LiftOptions& options) {
  const kernels::FiberSet fibers = options.parallel
                                       ? kernels::omp::solve_fibers(system, bottom, options.solver)
                                       : kernels::serial::solve_fibers(system, bottom, options.solver);
  TopGraph graph;
  graph.fibers.resize(bottom.vertices.size());
  for (std::size_t v = 0; v < fibers.size(); ++v) {
    for (const EquilibriumPoint& p : fibers[v]) {
      if (p.stability == Stability::Stable) {
        const std::size_t id = graph.nodes.size();
        graph.nodes.push_back({p, v, id});
        graph.fibers[v].push_back(id);
      } else if (options.keep_unstable && p.stability == Stability::Unstable) {
        graph.unstable.push_back(p);
      }
    }
  }
  graph.match_threshold =
      options.match_threshold > 0.0
          ? options.match_threshold
          : auto_match_threshold(system, graph, bottom.adjacency(), options.match_factor);

  const kernels::EdgeLists lists =
      options.parallel ? kernels::omp::build_edges(system, graph, bottom, options)
                       : kernels::serial::build_edges(system, graph, bottom, options);
  for (const auto& list : lists) graph.edges.insert(graph.edges.end(), list.begin(), list.end());
  return graph;
}

MultiBranchPath shortest_path(const TopGraph& graph, std::size_t start, std::size_t goal,
                              double switch_penalty) {
  const std::size_t n = graph.nodes.size();
  if (start >= n || goal >= n) {
    throw Error("shortest_path: node id out of range");
  }
  if (switch_penalty < 0.0) {
    throw Error("shortest_path: switch penalty must be nonnegative");
  }
  MultiBranchPath path;
  if (start == goal) {
    path.nodes = {start};
    return path;
  }

  const auto out = graph.out_edges();
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n, inf);
  std::vector<std::size_t> via(n, none);  // edge index used to reach the node
  std::vector<bool> settled(n, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[start] = 0.0;
  queue.emplace(0.0, start);
  std::size_t reached = 0;

  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (settled[v]) continue;
    settled[v] = true;
    ++reached;
    if (v == goal) break;
    for (std::size_t e : out[v]) {
      const TopEdge& edge = graph.edges[e];
      const double w = edge.weight + (edge.branch_switch ? switch_penalty : 0.0);
      const double nd = d + w;
      if (nd < dist[edge.to]) {
        dist[edge.to] = nd;
        via[edge.to] = e;
        queue.emplace(nd, edge.to);
      }
    }
  }

  if (!settled[goal]) {
    throw NoPath("goal node " + std::to_string(goal) + " unreachable from " +
                     std::to_string(start) + " (" + std::to_string(reached) + " nodes reachable)",
                 reached);
  }

  std::vector<std::size_t> edges_used;
  for (std::size_t v = goal; v != start; v = graph.edges[via[v]].from) edges_used.push_back(via[v]);
  std::reverse(edges_used.begin(), edges_used.end());
  path.nodes.push_back(start);
  for (std::size_t e : edges_used) {
    const TopEdge& edge = graph.edges[e];
    if (edge.branch_switch) path.switch_markers.push_back(path.nodes.size() - 1);
    path.total_cost += edge.weight + (edge.branch_switch ? switch_penalty : 0.0);
    path.nodes.push_back(edge.to);
  }
  return path;
}

std::size_t nearest_node(const PotentialSystem& system, const TopGraph& graph, const VectorXd& u,
                         const std::optional<VectorXd>& z) {
  if (graph.nodes.empty()) {
    throw Error("nearest_node: graph has no nodes");
  }
  std::size_t best = 0;
  double best_u = std::numeric_limits<double>::infinity();
  double best_z = std::numeric_limits<double>::infinity();
  for (const TopNode& node : graph.nodes) {
    const double du = (node.equilibrium.u - u).norm();
    const double dz = z ? system.fiber_distance(node.equilibrium.z_star, *z) : 0.0;
    if (du < best_u || (du == best_u && dz < best_z)) {
      best = node.node_id;
      best_u = du;
      best_z = dz;
    }
  }
  return best;
}

}  // namespace quasistat
