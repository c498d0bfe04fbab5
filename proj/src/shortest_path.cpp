#include "wardrop/shortest_path.hpp"

#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "wardrop/errors.hpp"

namespace wardrop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CostVector edge_costs(const Network& network, const FlowVector& flows, bool marginal) {
    if (static_cast<int>(flows.size()) != network.edge_count())
        throw std::invalid_argument("flow vector length does not match edge count");
    CostVector costs(flows.size());
    const auto& edges = network.edges();
    for (size_t e = 0; e < edges.size(); ++e)
        costs[e] = marginal ? edges[e].latency.marginal(flows[e])
                            : edges[e].latency.value(flows[e]);
    return costs;
}

ShortestPathTree shortest_paths(const Network& network, const CostVector& costs, int origin) {
    if (static_cast<int>(costs.size()) != network.edge_count())
        throw std::invalid_argument("cost vector length does not match edge count");
    if (origin < 0 || origin >= network.node_count())
        throw std::invalid_argument("origin outside [0, node_count)");

    ShortestPathTree tree;
    tree.origin = origin;
    tree.dist.assign(static_cast<size_t>(network.node_count()), kInf);
    tree.pred_edge.assign(static_cast<size_t>(network.node_count()), -1);
    tree.dist[static_cast<size_t>(origin)] = 0.0;

    // (dist, node) min-heap; equal distances pop in node-id order.
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    heap.emplace(0.0, origin);
    std::vector<char> done(static_cast<size_t>(network.node_count()), 0);

    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<size_t>(u)]) continue;
        done[static_cast<size_t>(u)] = 1;
        for (int e : network.outgoing(u)) {
            const int v = network.edge(e).head;
            const double nd = d + costs[static_cast<size_t>(e)];
            double& dv = tree.dist[static_cast<size_t>(v)];
            int& pv = tree.pred_edge[static_cast<size_t>(v)];
            if (nd < dv) {
                dv = nd;
                pv = e;
                heap.emplace(nd, v);
            } else if (nd == dv && pv >= 0 && e < pv) {
                pv = e;  // lowest edge id wins among equal-cost relaxations
            }
        }
    }
    return tree;
}

namespace detail {

void load_origin(const Instance& instance, const CostVector& costs, int origin_index,
                 FlowVector& flows, double& value) {
    const Network& net = instance.network();
    const ShortestPathTree tree = shortest_paths(net, costs, instance.origins()[static_cast<size_t>(origin_index)]);
    for (int idx : instance.commodities_of(origin_index)) {
        const Commodity& c = instance.commodities()[static_cast<size_t>(idx)];
        if (c.demand <= 0.0) continue;
        const double dist = tree.dist[static_cast<size_t>(c.destination)];
        if (dist == kInf)
            throw InfeasibleError("destination " + std::to_string(c.destination) +
                                  " unreachable from origin " + std::to_string(c.origin));
        value += c.demand * dist;
        for (int v = c.destination; v != c.origin;) {
            const int e = tree.pred_edge[static_cast<size_t>(v)];
            flows[static_cast<size_t>(e)] += c.demand;
            v = net.edge(e).tail;
        }
    }
}

AonResult all_or_nothing_with_value(const Instance& instance, const CostVector& costs) {
    AonResult out;
    out.flows.assign(static_cast<size_t>(instance.network().edge_count()), 0.0);
    for (size_t g = 0; g < instance.origins().size(); ++g)
        load_origin(instance, costs, static_cast<int>(g), out.flows, out.value);
    return out;
}

}  // namespace detail

FlowVector all_or_nothing(const Instance& instance, const CostVector& costs) {
    return detail::all_or_nothing_with_value(instance, costs).flows;
}

std::vector<double> min_path_latencies(const Instance& instance, const FlowVector& flows) {
    const CostVector costs = edge_costs(instance.network(), flows);
    std::vector<double> mu(instance.commodities().size(), kInf);
    const auto origins = instance.origins();
    for (size_t g = 0; g < origins.size(); ++g) {
        const ShortestPathTree tree = shortest_paths(instance.network(), costs, origins[g]);
        for (int idx : instance.commodities_of(static_cast<int>(g))) {
            const Commodity& c = instance.commodities()[static_cast<size_t>(idx)];
            const double dist = tree.dist[static_cast<size_t>(c.destination)];
            if (dist == kInf && c.demand > 0.0)
                throw InfeasibleError("destination " + std::to_string(c.destination) +
                                      " unreachable from origin " + std::to_string(c.origin));
            mu[static_cast<size_t>(idx)] = dist;
        }
    }
    return mu;
}

}  // namespace wardrop
