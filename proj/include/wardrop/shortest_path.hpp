#ifndef WARDROP_SHORTEST_PATH_HPP
#define WARDROP_SHORTEST_PATH_HPP

#include <vector>

#include "wardrop/model.hpp"

namespace wardrop {

/// Snapshot of per-edge costs (latencies evaluated at some flow).
using CostVector = std::vector<double>;

struct ShortestPathTree {
    int origin = 0;
    std::vector<double> dist;      // +inf for unreachable nodes
    std::vector<int> pred_edge;    // -1 for the origin and unreachable nodes
};

/// Per-edge latencies at the given flows; `marginal` switches to l + x l'.
CostVector edge_costs(const Network& network, const FlowVector& flows, bool marginal = false);

/// One-to-all label setting under nonnegative costs. Ties are broken towards
/// the lowest edge id so repeated runs build identical trees.
ShortestPathTree shortest_paths(const Network& network, const CostVector& costs, int origin);

/// Routes each commodity's full demand along its current shortest path.
/// Throws InfeasibleError when a positive demand cannot reach its destination.
FlowVector all_or_nothing(const Instance& instance, const CostVector& costs);

/// Shortest-path distance from each commodity's origin to its destination
/// under costs l_e(f_e); one tree per distinct origin. Zero-demand commodities
/// with unreachable destinations get +inf.
std::vector<double> min_path_latencies(const Instance& instance, const FlowVector& flows);

namespace detail {

/// All-or-nothing loading that also reports sum_i d_i * dist_i (the value of
/// the loading under `costs`), reusing one tree pass. Used by the solver.
struct AonResult {
    FlowVector flows;
    double value = 0.0;
};
AonResult all_or_nothing_with_value(const Instance& instance, const CostVector& costs);

/// Shortest-path loading for the commodities of instance.origins()[origin_index]
/// only: adds their flows into `flows` and d_i*dist_i into `value`.
void load_origin(const Instance& instance, const CostVector& costs, int origin_index,
                 FlowVector& flows, double& value);

}  // namespace detail

}  // namespace wardrop

#endif
