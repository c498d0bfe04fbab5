#include "wardrop/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wardrop/shortest_path.hpp"

namespace wardrop {

namespace detail {

namespace {
double directional_derivative(const std::vector<PolynomialLatency>& latencies,
                              const FlowVector& flows, const std::vector<double>& direction,
                              double alpha) {
    double g = 0.0;
    for (size_t e = 0; e < flows.size(); ++e) {
        if (direction[e] == 0.0) continue;
        const double x = std::max(0.0, flows[e] + alpha * direction[e]);
        g += latencies[e].value(x) * direction[e];
    }
    return g;
}
}  // namespace

double exact_line_search(const std::vector<PolynomialLatency>& latencies,
                         const FlowVector& flows, const std::vector<double>& direction,
                         double tol) {
    const double g0 = directional_derivative(latencies, flows, direction, 0.0);
    if (g0 >= 0.0) return 0.0;
    if (directional_derivative(latencies, flows, direction, 1.0) <= 0.0) return 1.0;

    const double target = tol * std::abs(g0);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = directional_derivative(latencies, flows, direction, mid);
        if (std::abs(gm) <= target) return mid;
        (gm < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

namespace {

void validate(const SolverConfig& config) {
    if (!(config.gap_tolerance > 0.0)) throw std::invalid_argument("gap_tolerance must be > 0");
    if (!(config.line_search_tolerance > 0.0))
        throw std::invalid_argument("line_search_tolerance must be > 0");
    if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::vector<PolynomialLatency> effective_latencies(const Network& network, Objective objective) {
    std::vector<PolynomialLatency> lat;
    lat.reserve(static_cast<size_t>(network.edge_count()));
    for (const Edge& e : network.edges())
        lat.push_back(objective == Objective::SystemOptimum ? e.latency.marginal_transform()
                                                            : e.latency);
    return lat;
}

double gap_at(const std::vector<PolynomialLatency>& latencies, const FlowVector& flows,
              double best_response_value) {
    double on_current = 0.0;
    for (size_t e = 0; e < flows.size(); ++e) on_current += latencies[e].value(flows[e]) * flows[e];
    if (on_current <= 0.0) return 0.0;  // all-zero costs (or flows)
    return 1.0 - best_response_value / on_current;
}

// Loadings seen so far for one origin group, with their convex weights.
struct OriginAtoms {
    std::vector<FlowVector> vertices;
    std::vector<double> weights;
};

// Moves weight between the cheapest and the dearest stored loading of each
// origin until their costs agree (pairwise exchanges with exact line search).
class DecompositionState {
public:
    DecompositionState(const Instance& instance, const std::vector<PolynomialLatency>& latencies)
        : instance_(instance),
          latencies_(latencies),
          edge_count_(static_cast<size_t>(instance.network().edge_count())),
          blocks_(instance.origins().size()) {}

    // Seeds every origin with its loading under the given costs; returns the
    // combined flows.
    FlowVector seed(const CostVector& costs) {
        FlowVector total(edge_count_, 0.0);
        for (size_t g = 0; g < blocks_.size(); ++g) {
            FlowVector y(edge_count_, 0.0);
            double ignored = 0.0;
            detail::load_origin(instance_, costs, static_cast<int>(g), y, ignored);
            for (size_t e = 0; e < edge_count_; ++e) total[e] += y[e];
            blocks_[g].vertices.push_back(std::move(y));
            blocks_[g].weights.push_back(1.0);
        }
        return total;
    }

    // Flows implied by the stored weights; refreshing from the atoms keeps f
    // and the weights consistent across many exchanges.
    FlowVector combination() const {
        FlowVector total(edge_count_, 0.0);
        for (const OriginAtoms& blk : blocks_)
            for (size_t i = 0; i < blk.vertices.size(); ++i)
                for (size_t e = 0; e < edge_count_; ++e)
                    total[e] += blk.weights[i] * blk.vertices[i][e];
        return total;
    }

    void refine(FlowVector& flows, double scale, const SolverConfig& config) {
        CostVector costs(edge_count_);
        std::vector<double> direction(edge_count_);
        const double inner_tol = 0.1 * config.gap_tolerance * scale;
        for (size_t g = 0; g < blocks_.size(); ++g) {
            OriginAtoms& blk = blocks_[g];
            for (size_t e = 0; e < edge_count_; ++e) costs[e] = latencies_[e].value(flows[e]);

            // Current best response of this origin joins the stored atoms.
            FlowVector y(edge_count_, 0.0);
            double ignored = 0.0;
            detail::load_origin(instance_, costs, static_cast<int>(g), y, ignored);
            size_t added = blk.vertices.size();
            for (size_t i = 0; i < blk.vertices.size(); ++i)
                if (blk.vertices[i] == y) added = i;
            if (added == blk.vertices.size()) {
                blk.vertices.push_back(std::move(y));
                blk.weights.push_back(0.0);
            }

            for (int pass = 0; pass < 64; ++pass) {
                for (size_t e = 0; e < edge_count_; ++e) costs[e] = latencies_[e].value(flows[e]);
                size_t best = 0, worst = 0;
                double best_val = 0.0, worst_val = 0.0;
                bool have_best = false, have_worst = false;
                for (size_t i = 0; i < blk.vertices.size(); ++i) {
                    double val = 0.0;
                    for (size_t e = 0; e < edge_count_; ++e) val += costs[e] * blk.vertices[i][e];
                    if (!have_best || val < best_val) {
                        best_val = val;
                        best = i;
                        have_best = true;
                    }
                    if (blk.weights[i] > 0.0 && (!have_worst || val > worst_val)) {
                        worst_val = val;
                        worst = i;
                        have_worst = true;
                    }
                }
                if (!have_best || !have_worst || best == worst) break;
                if (worst_val - best_val <= inner_tol) break;

                const double transferable = blk.weights[worst];
                for (size_t e = 0; e < edge_count_; ++e)
                    direction[e] =
                        transferable * (blk.vertices[best][e] - blk.vertices[worst][e]);
                const double alpha =
                    detail::exact_line_search(latencies_, flows, direction, config.line_search_tolerance);
                if (alpha == 0.0) break;
                for (size_t e = 0; e < edge_count_; ++e)
                    flows[e] = std::max(0.0, flows[e] + alpha * direction[e]);
                blk.weights[best] += alpha * transferable;
                blk.weights[worst] -= alpha * transferable;
                if (alpha == 1.0) blk.weights[worst] = 0.0;
            }

            for (size_t i = blk.vertices.size(); i-- > 0;) {
                if (blk.weights[i] == 0.0 && i != added) {
                    blk.vertices.erase(blk.vertices.begin() + static_cast<long>(i));
                    blk.weights.erase(blk.weights.begin() + static_cast<long>(i));
                }
            }
        }
    }

private:
    const Instance& instance_;
    const std::vector<PolynomialLatency>& latencies_;
    size_t edge_count_;
    std::vector<OriginAtoms> blocks_;
};

}  // namespace

Solution solve(const Instance& instance, const SolverConfig& config) {
    validate(config);

    const Network& net = instance.network();
    const size_t m = static_cast<size_t>(net.edge_count());
    const auto latencies = effective_latencies(net, config.objective);

    Solution out;

    bool any_demand = false;
    for (const Commodity& c : instance.commodities())
        if (c.demand > 0.0) any_demand = true;
    if (!any_demand) {
        out.flows.assign(m, 0.0);
        out.converged = true;
        out.mu = min_path_latencies(instance, out.flows);
        return out;
    }

    const bool decompose = config.direction == DirectionRule::SimplicialDecomposition;
    DecompositionState atoms(instance, latencies);

    CostVector costs(m);
    auto refresh_costs = [&](const FlowVector& f) {
        for (size_t e = 0; e < m; ++e) costs[e] = latencies[e].value(f[e]);
    };

    refresh_costs(FlowVector(m, 0.0));
    FlowVector flows = decompose ? atoms.seed(costs) : all_or_nothing(instance, costs);

    FlowVector target;  // previous target point for the conjugate rule
    std::vector<double> dir(m);
    bool have_target = false;

    int iter = 0;
    while (iter < config.max_iterations) {
        ++iter;
        if (decompose && iter > 1) flows = atoms.combination();
        refresh_costs(flows);
        const auto aon = detail::all_or_nothing_with_value(instance, costs);
        double on_current = 0.0;
        for (size_t e = 0; e < m; ++e) on_current += costs[e] * flows[e];
        out.relative_gap = on_current > 0.0 ? 1.0 - aon.value / on_current : 0.0;
        if (config.collect_trace) {
            double phi = 0.0;
            for (size_t e = 0; e < m; ++e) phi += latencies[e].integral(flows[e]);
            out.objective_trace.push_back(phi);
        }
        if (out.relative_gap <= config.gap_tolerance) {
            out.converged = true;
            break;
        }

        if (decompose) {
            atoms.refine(flows, on_current, config);
            continue;
        }

        const FlowVector* step_target = &aon.flows;
        FlowVector blended;
        if (config.direction == DirectionRule::ConjugateFrankWolfe && have_target) {
            // Pick s = beta*prev_target + (1-beta)*aon with (s-f) conjugate to
            // (prev_target-f) under the diagonal Hessian of the objective.
            double num = 0.0, den = 0.0;
            for (size_t e = 0; e < m; ++e) {
                const double h = latencies[e].derivative(flows[e]);
                const double a = target[e] - flows[e];
                const double b = aon.flows[e] - flows[e];
                num += h * a * b;
                den += h * a * a;
            }
            double beta = 0.0;
            if (std::isfinite(num) && std::isfinite(den) && num != den)
                beta = num / (num - den);
            beta = std::clamp(beta, 0.0, 0.999);
            if (beta > 0.0) {
                blended.resize(m);
                double descent = 0.0;
                for (size_t e = 0; e < m; ++e) {
                    blended[e] = beta * target[e] + (1.0 - beta) * aon.flows[e];
                    descent += costs[e] * (blended[e] - flows[e]);
                }
                if (descent < 0.0) step_target = &blended;
            }
        }

        for (size_t e = 0; e < m; ++e) dir[e] = (*step_target)[e] - flows[e];
        double alpha = detail::exact_line_search(latencies, flows, dir, config.line_search_tolerance);
        if (alpha == 0.0 && step_target != &aon.flows) {
            // Conjugate target made no progress; retry with the plain direction.
            for (size_t e = 0; e < m; ++e) dir[e] = aon.flows[e] - flows[e];
            alpha = detail::exact_line_search(latencies, flows, dir, config.line_search_tolerance);
            step_target = &aon.flows;
        }
        if (alpha == 0.0) break;  // no representable progress along the target

        for (size_t e = 0; e < m; ++e) flows[e] = std::max(0.0, flows[e] + alpha * dir[e]);
        target = *step_target;
        have_target = true;
    }

    out.iterations = iter;
    out.flows = std::move(flows);
    double obj = 0.0;
    for (size_t e = 0; e < m; ++e) obj += latencies[e].integral(out.flows[e]);
    out.objective_value = obj;
    out.total_cost = total_cost(instance, out.flows);
    out.mu = min_path_latencies(instance, out.flows);
    return out;
}

double relative_gap(const Instance& instance, const FlowVector& flows, Objective objective) {
    const auto latencies = effective_latencies(instance.network(), objective);
    CostVector costs(flows.size());
    for (size_t e = 0; e < flows.size(); ++e) costs[e] = latencies[e].value(flows[e]);
    const auto aon = detail::all_or_nothing_with_value(instance, costs);
    return gap_at(latencies, flows, aon.value);
}

}  // namespace wardrop
