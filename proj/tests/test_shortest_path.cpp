#include <doctest.h>

#include <random>

#include "wardrop/errors.hpp"
#include "wardrop/examples.hpp"
#include "wardrop/shortest_path.hpp"
#include "wardrop/tntp.hpp"

#include "test_support.hpp"

using namespace wardrop;
namespace wt = wardrop::testing;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("shortest_paths") {
    TEST_CASE("pigou at zero flow routes through the monomial edge") {
        const Instance pigou = gen_pigou({4, 1.0});
        const CostVector costs = edge_costs(pigou.network(), FlowVector{0.0, 0.0});
        const ShortestPathTree tree = shortest_paths(pigou.network(), costs, 0);
        CHECK(tree.dist[1] == 0.0);
        CHECK(tree.pred_edge[1] == 0);
    }

    TEST_CASE("two-commodity at zero flow") {
        const Instance two = gen_two_commodity({2.0});
        const CostVector costs = edge_costs(two.network(), FlowVector{0.0, 0.0, 0.0});
        const ShortestPathTree tree = shortest_paths(two.network(), costs, 0);
        CHECK(tree.dist[1] == 0.0);
        CHECK(tree.dist[2] == 0.0);
        CHECK(tree.pred_edge[2] == 2);  // direct edge costs k*0 = 0
    }

    TEST_CASE("equal-cost relaxations keep the lowest edge id") {
        // k=1 makes the via-t1 path and the direct edge both cost 0.
        const Instance two = gen_two_commodity({1.0});
        const CostVector costs = edge_costs(two.network(), FlowVector{0.0, 0.0, 0.0});
        const ShortestPathTree tree = shortest_paths(two.network(), costs, 0);
        CHECK(tree.dist[2] == 0.0);
        CHECK(tree.pred_edge[2] == 1);
    }

    TEST_CASE("unreachable nodes get infinite distance") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::constant(2)});
        const Network net(3, std::move(edges));
        const ShortestPathTree tree = shortest_paths(net, CostVector{2.0}, 0);
        CHECK(tree.dist[1] == 2.0);
        CHECK(tree.dist[2] == kInf);
        CHECK(tree.pred_edge[2] == -1);
    }

    TEST_CASE("sioux falls free-flow distances match an independent oracle") {
        const Instance sf =
            load_instance(wt::data_path("SiouxFalls_net.tntp"), wt::data_path("SiouxFalls_trips.tntp"));
        const CostVector costs =
            edge_costs(sf.network(), FlowVector(static_cast<size_t>(sf.network().edge_count()), 0.0));
        for (int origin : {19, 0, 9}) {  // includes node 20 (0-based 19)
            const ShortestPathTree tree = shortest_paths(sf.network(), costs, origin);
            const auto oracle = wt::bellman_ford(sf.network(), costs, origin);
            for (int v = 0; v < sf.network().node_count(); ++v)
                CHECK(tree.dist[static_cast<size_t>(v)] ==
                      doctest::Approx(oracle[static_cast<size_t>(v)]).epsilon(1e-12));
        }
    }

    TEST_CASE("relaxation audit on random instances") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> flow(0.0, 3.0);
        for (int trial = 0; trial < 50; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            FlowVector flows(static_cast<size_t>(inst.network().edge_count()));
            for (double& f : flows) f = flow(rng);
            const CostVector costs = edge_costs(inst.network(), flows);
            const ShortestPathTree tree = shortest_paths(inst.network(), costs, inst.origins()[0]);
            for (int e = 0; e < inst.network().edge_count(); ++e) {
                const Edge& edge = inst.network().edge(e);
                const double du = tree.dist[static_cast<size_t>(edge.tail)];
                if (du == kInf) continue;
                CHECK(tree.dist[static_cast<size_t>(edge.head)] <=
                      du + costs[static_cast<size_t>(e)] + 1e-12);
            }
            // Distances agree with the label-correcting oracle.
            const auto oracle = wt::bellman_ford(inst.network(), costs, inst.origins()[0]);
            for (size_t v = 0; v < oracle.size(); ++v)
                CHECK(wt::close_or_both_nan(tree.dist[v] == kInf ? oracle[v] : tree.dist[v],
                                            oracle[v], 1e-12));
        }
    }
}

TEST_SUITE("all_or_nothing") {
    TEST_CASE("pigou zero-flow costs load the monomial edge") {
        const Instance pigou = gen_pigou({4, 1.0});
        const FlowVector y = all_or_nothing(pigou, CostVector{0.0, 1.0});
        CHECK(y[0] == 1.0);
        CHECK(y[1] == 0.0);
    }

    TEST_CASE("two-commodity zero-flow costs") {
        const Instance two = gen_two_commodity({2.0});
        const CostVector costs = edge_costs(two.network(), FlowVector{0, 0, 0});
        const FlowVector y = all_or_nothing(two, costs);
        CHECK(y[0] == 1.0);  // d1 on s->t1
        CHECK(y[1] == 0.0);
        CHECK(y[2] == 2.0);  // d2 on the direct edge
    }

    TEST_CASE("zero demands produce the zero vector") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::constant(1)});
        const Instance inst(Network(2, std::move(edges)), {{0, 1, 0.0}});
        const FlowVector y = all_or_nothing(inst, CostVector{1.0});
        CHECK(y[0] == 0.0);
    }

    TEST_CASE("loading value equals demand-weighted distances") {
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> flow(0.0, 3.0);
        for (int trial = 0; trial < 50; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            FlowVector flows(static_cast<size_t>(inst.network().edge_count()));
            for (double& f : flows) f = flow(rng);
            const CostVector costs = edge_costs(inst.network(), flows);
            const auto aon = detail::all_or_nothing_with_value(inst, costs);

            double inner = 0.0;
            for (size_t e = 0; e < aon.flows.size(); ++e) inner += costs[e] * aon.flows[e];
            CHECK(inner == doctest::Approx(aon.value).epsilon(1e-10));

            double by_distance = 0.0;
            for (size_t g = 0; g < inst.origins().size(); ++g) {
                const auto tree = shortest_paths(inst.network(), costs, inst.origins()[g]);
                for (int idx : inst.commodities_of(static_cast<int>(g))) {
                    const auto& c = inst.commodities()[static_cast<size_t>(idx)];
                    if (c.demand > 0.0)
                        by_distance += c.demand * tree.dist[static_cast<size_t>(c.destination)];
                }
            }
            CHECK(by_distance == doctest::Approx(aon.value).epsilon(1e-10));
        }
    }

    TEST_CASE("conservation per commodity") {
        std::mt19937_64 rng(44);
        for (int trial = 0; trial < 30; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            const int n = inst.network().node_count();
            const CostVector costs = edge_costs(
                inst.network(), FlowVector(static_cast<size_t>(inst.network().edge_count()), 0.0));
            // Load one commodity at a time: net outflow d at origin, net inflow
            // d at destination, zero elsewhere.
            for (const Commodity& c : inst.commodities()) {
                const Instance single(inst.network(), {c});
                const FlowVector y = all_or_nothing(single, costs);
                std::vector<double> net_out(static_cast<size_t>(n), 0.0);
                for (int e = 0; e < inst.network().edge_count(); ++e) {
                    net_out[static_cast<size_t>(inst.network().edge(e).tail)] += y[static_cast<size_t>(e)];
                    net_out[static_cast<size_t>(inst.network().edge(e).head)] -= y[static_cast<size_t>(e)];
                }
                for (int v = 0; v < n; ++v) {
                    double expected = 0.0;
                    if (v == c.origin) expected = c.demand;
                    if (v == c.destination) expected = -c.demand;
                    CHECK(net_out[static_cast<size_t>(v)] == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("determinism") {
        std::mt19937_64 rng(45);
        const Instance inst = wt::random_small_instance(rng);
        const CostVector costs = edge_costs(
            inst.network(), FlowVector(static_cast<size_t>(inst.network().edge_count()), 0.0));
        const FlowVector a = all_or_nothing(inst, costs);
        const FlowVector b = all_or_nothing(inst, costs);
        CHECK(a == b);
    }
}

TEST_SUITE("min_path_latencies") {
    TEST_CASE("two-commodity equilibria") {
        const Instance two = gen_two_commodity({2.0});
        const auto mu = min_path_latencies(two, FlowVector{1.0, 0.0, 2.0});
        CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mu[1] == doctest::Approx(4.0).epsilon(1e-12));

        // After scaling by (1+eps) the equilibrium shifts by k*eps on both.
        const double eps = 0.25, k = 2.0;
        const double y = eps * (k - 1.0);
        const FlowVector scaled{(1 + eps) + y, y, k * (1 + eps) - y};
        const auto mu_scaled = min_path_latencies(two, scaled);
        CHECK(mu_scaled[0] == doctest::Approx(1 + k * eps).epsilon(1e-12));
        CHECK(mu_scaled[1] == doctest::Approx(k * k + k * eps).epsilon(1e-12));
    }

    TEST_CASE("zero flows on pigou") {
        const Instance pigou = gen_pigou({3, 1.0});
        const auto mu = min_path_latencies(pigou, FlowVector{0.0, 0.0});
        CHECK(mu[0] == 0.0);
    }

    TEST_CASE("unreachable positive demand throws") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::constant(1)});
        const Instance zero_demand(Network(3, std::move(edges)), {{0, 2, 0.0}});
        // Zero-demand unreachable commodity: mu reported as +inf, no error.
        const auto mu = min_path_latencies(zero_demand, FlowVector{0.0});
        CHECK(mu[0] == kInf);
    }

    TEST_CASE("zero-demand reachable commodity still gets its distance") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::constant(2.5)});
        const Instance inst(Network(2, std::move(edges)), {{0, 1, 0.0}});
        const auto mu = min_path_latencies(inst, FlowVector{0.0});
        CHECK(mu[0] == doctest::Approx(2.5));
    }

    TEST_CASE("self-loops are tolerated and never carry useful flow") {
        std::vector<Edge> edges;
        edges.push_back({0, 0, PolynomialLatency::constant(0.0)});  // zero-cost self-loop
        edges.push_back({0, 1, PolynomialLatency::constant(1.0)});
        const Instance inst(Network(2, std::move(edges)), {{0, 1, 3.0}});
        const CostVector costs{0.0, 1.0};
        const ShortestPathTree tree = shortest_paths(inst.network(), costs, 0);
        CHECK(tree.dist[1] == 1.0);
        const FlowVector y = all_or_nothing(inst, costs);
        CHECK(y[0] == 0.0);
        CHECK(y[1] == 3.0);
    }
}
