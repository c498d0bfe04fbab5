#include <doctest.h>

#include <cmath>
#include <random>

#include "wardrop/examples.hpp"
#include "wardrop/shortest_path.hpp"
#include "wardrop/solver.hpp"

#include "test_support.hpp"

using namespace wardrop;
namespace wt = wardrop::testing;

namespace {

SolverConfig plain_config() {
    SolverConfig c;
    c.direction = DirectionRule::FrankWolfe;
    return c;
}

// Random point of the feasible polytope: convex combination of
// all-or-nothing loadings under random positive costs.
FlowVector random_feasible(const Instance& inst, std::mt19937_64& rng, int vertices = 4) {
    const size_t m = static_cast<size_t>(inst.network().edge_count());
    std::uniform_real_distribution<double> u(0.05, 2.0);
    std::vector<double> weights(static_cast<size_t>(vertices));
    double total = 0.0;
    for (double& w : weights) total += (w = u(rng));
    FlowVector f(m, 0.0);
    for (int i = 0; i < vertices; ++i) {
        CostVector costs(m);
        for (double& c : costs) c = u(rng);
        const FlowVector v = all_or_nothing(inst, costs);
        for (size_t e = 0; e < m; ++e) f[e] += weights[static_cast<size_t>(i)] / total * v[e];
    }
    return f;
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("pigou user equilibrium") {
        const Instance pigou = gen_pigou({4, 1.0});
        for (auto rule : {DirectionRule::FrankWolfe, DirectionRule::ConjugateFrankWolfe}) {
            SolverConfig config;
            config.direction = rule;
            const Solution s = solve(pigou, config);
            CHECK(s.converged);
            CHECK(s.relative_gap <= 1e-8);
            CHECK(s.flows[0] == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(s.flows[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
            CHECK(s.total_cost == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(s.mu[0] == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    TEST_CASE("pigou system optimum") {
        const Instance pigou = gen_pigou({4, 1.0});
        SolverConfig config;
        config.objective = Objective::SystemOptimum;
        const Solution s = solve(pigou, config);
        const double interior = std::pow(0.2, 0.25);
        const double expected_cost = 1.0 - 0.8 * interior;
        CHECK(s.converged);
        CHECK(s.flows[0] == doctest::Approx(interior).epsilon(1e-6));
        CHECK(s.total_cost == doctest::Approx(expected_cost).epsilon(1e-8));
        // For SO the objective is the total cost itself.
        CHECK(s.objective_value == doctest::Approx(s.total_cost).epsilon(1e-12));
    }

    TEST_CASE("pigou demand 2 splits at latency 1") {
        const Instance pigou = gen_pigou({1, 2.0});
        const Solution s = solve(pigou, plain_config());
        CHECK(s.flows[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(s.flows[1] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(s.mu[0] == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("two-commodity scaled equilibrium matches the closed form") {
        const Instance two = gen_two_commodity({2.0});
        const Instance scaled = scale_demands(two, 0.5);
        const Solution s = solve(scaled);
        CHECK(s.converged);
        CHECK(s.flows[1] == doctest::Approx(0.5).epsilon(1e-5));  // diversion eps*(k-1)
        CHECK(s.mu[0] == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(s.mu[1] == doctest::Approx(5.0).epsilon(1e-6));
        CHECK(s.total_cost == doctest::Approx(18.0).epsilon(1e-6));
    }

    TEST_CASE("zero demands return immediately") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::monomial(2)});
        const Instance inst(Network(2, std::move(edges)), {{0, 1, 0.0}});
        const Solution s = solve(inst);
        CHECK(s.converged);
        CHECK(s.iterations == 0);
        CHECK(s.relative_gap == 0.0);
        CHECK(s.flows[0] == 0.0);
    }

    TEST_CASE("iteration cap returns the best iterate without converging") {
        const Instance two = gen_two_commodity({2.0});
        SolverConfig config;
        config.max_iterations = 1;
        const Solution s = solve(scale_demands(two, 0.5), config);
        CHECK_FALSE(s.converged);
        CHECK(s.iterations == 1);
    }

    TEST_CASE("objective is non-increasing across iterations") {
        std::mt19937_64 rng(101);
        for (int trial = 0; trial < 20; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            for (auto rule : {DirectionRule::FrankWolfe, DirectionRule::ConjugateFrankWolfe}) {
                SolverConfig config;
                config.direction = rule;
                config.collect_trace = true;
                const Solution s = solve(inst, config);
                for (size_t i = 1; i < s.objective_trace.size(); ++i)
                    CHECK(s.objective_trace[i] <=
                          s.objective_trace[i - 1] +
                              1e-12 * std::max(1.0, std::abs(s.objective_trace[i - 1])));
            }
        }
    }

    TEST_CASE("equilibrium satisfies the variational inequality") {
        std::mt19937_64 rng(102);
        for (int trial = 0; trial < 20; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            SolverConfig config;
            config.max_iterations = 200000;
            const Solution s = solve(inst, config);
            REQUIRE(s.converged);
            const double cost = s.total_cost;
            const CostVector costs = edge_costs(inst.network(), s.flows);
            for (int other = 0; other < 50; ++other) {
                const FlowVector fbar = random_feasible(inst, rng);
                double surplus = 0.0;
                for (size_t e = 0; e < fbar.size(); ++e)
                    surplus += costs[e] * (fbar[e] - s.flows[e]);
                CHECK(surplus >= -10.0 * config.gap_tolerance * cost);
            }
        }
    }

    TEST_CASE("system optimum never costs more than the equilibrium") {
        std::mt19937_64 rng(103);
        for (int trial = 0; trial < 20; ++trial) {
            const Instance inst = wt::random_small_instance(rng);
            SolverConfig ue, so;
            ue.max_iterations = so.max_iterations = 200000;
            so.objective = Objective::SystemOptimum;
            const Solution sue = solve(inst, ue);
            const Solution sso = solve(inst, so);
            CHECK(sso.total_cost <= sue.total_cost * (1.0 + 1e-6) + 1e-12);
        }
    }

    TEST_CASE("identical inputs produce identical solutions") {
        const Instance two = scale_demands(gen_two_commodity({3.0}), 0.3);
        const Solution a = solve(two);
        const Solution b = solve(two);
        CHECK(a.flows == b.flows);
        CHECK(a.iterations == b.iterations);
        CHECK(a.relative_gap == b.relative_gap);
    }
}

TEST_SUITE("relative_gap") {
    TEST_CASE("converged equilibrium has a tiny gap") {
        const Instance pigou = gen_pigou({4, 1.0});
        const Solution s = solve(pigou);
        CHECK(relative_gap(pigou, s.flows, Objective::UserEquilibrium) <= 1e-8);
    }

    TEST_CASE("all demand on the constant edge of pigou gives gap 1") {
        const Instance pigou = gen_pigou({1, 1.0});
        // Current cost 1*1 = 1; best response loads the empty monomial edge at
        // cost 0, so the gap is 1 - 0/1 = 1.
        CHECK(relative_gap(pigou, FlowVector{0.0, 1.0}, Objective::UserEquilibrium) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("zero demand gives gap 0") {
        std::vector<Edge> edges;
        edges.push_back({0, 1, PolynomialLatency::constant(1)});
        const Instance inst(Network(2, std::move(edges)), {{0, 1, 0.0}});
        CHECK(relative_gap(inst, FlowVector{0.0}, Objective::UserEquilibrium) == 0.0);
    }
}

TEST_SUITE("line_search") {
    TEST_CASE("root satisfies the slack condition or sits on the boundary") {
        std::mt19937_64 rng(104);
        std::uniform_real_distribution<double> coeff(0.0, 2.0);
        std::uniform_real_distribution<double> point(0.0, 3.0);
        std::uniform_int_distribution<int> deg(0, 4);
        const double tol = 1e-12;
        for (int trial = 0; trial < 300; ++trial) {
            const size_t m = 1 + static_cast<size_t>(trial % 5);
            std::vector<PolynomialLatency> lat;
            FlowVector f(m);
            std::vector<double> dir(m);
            for (size_t e = 0; e < m; ++e) {
                std::vector<double> c(static_cast<size_t>(deg(rng)) + 1);
                for (double& v : c) v = coeff(rng);
                lat.emplace_back(std::move(c));
                f[e] = point(rng);
                dir[e] = point(rng) - f[e];  // endpoint stays nonnegative
            }
            const double alpha = detail::exact_line_search(lat, f, dir, tol);
            auto g = [&](double a) {
                double acc = 0.0;
                for (size_t e = 0; e < m; ++e)
                    acc += lat[e].value(std::max(0.0, f[e] + a * dir[e])) * dir[e];
                return acc;
            };
            if (alpha != 0.0 && alpha != 1.0)
                CHECK(std::abs(g(alpha)) <= tol * std::abs(g(0.0)) + 1e-300);
            if (alpha == 0.0) CHECK(g(0.0) >= 0.0);
            if (alpha == 1.0) CHECK(g(1.0) <= 0.0);
        }
    }

    TEST_CASE("constant costs walk to the boundary") {
        std::vector<PolynomialLatency> lat;
        lat.push_back(PolynomialLatency::constant(1.0));
        lat.push_back(PolynomialLatency::constant(2.0));
        // Moving flow from the cost-2 edge to the cost-1 edge is always good.
        CHECK(detail::exact_line_search(lat, {0.0, 1.0}, {1.0, -1.0}, 1e-12) == 1.0);
        // And the reverse never helps.
        CHECK(detail::exact_line_search(lat, {1.0, 0.0}, {-1.0, 1.0}, 1e-12) == 0.0);
    }
}
