#ifndef WARDROP_SOLVER_HPP
#define WARDROP_SOLVER_HPP

#include <vector>

#include "wardrop/model.hpp"

namespace wardrop {

enum class Objective {
    UserEquilibrium,  // minimize the potential sum_e int_0^{f_e} l_e
    SystemOptimum,    // minimize total cost C(f)
};

enum class DirectionRule {
    FrankWolfe,           // step towards the all-or-nothing loading
    ConjugateFrankWolfe,  // blend the target with the previous one (conjugate
                          // w.r.t. the current diagonal Hessian)
    SimplicialDecomposition,  // keep the loadings seen so far per origin and
                              // equilibrate their convex weights by pairwise
                              // exchanges; reaches tight gaps in a few dozen
                              // loadings where the one-direction rules stall
};

struct SolverConfig {
    double gap_tolerance = 1e-8;
    int max_iterations = 20000;
    double line_search_tolerance = 1e-12;  // on the step alpha
    Objective objective = Objective::UserEquilibrium;
    DirectionRule direction = DirectionRule::SimplicialDecomposition;
    bool collect_trace = false;  // record the objective at every iteration
};

struct Solution {
    FlowVector flows;
    double objective_value = 0.0;  // potential for UE, C(f) for SO
    double total_cost = 0.0;       // always C(f) under the original latencies
    double relative_gap = 0.0;     // last evaluated gap
    int iterations = 0;
    bool converged = false;
    std::vector<double> mu;  // min path latency per commodity at `flows`
    std::vector<double> objective_trace;  // filled when collect_trace is set
};

/// Convex-combinations assignment: repeatedly load shortest paths under the
/// objective's costs (latencies for UE, marginal latencies for SO), take an
/// exact line-search step towards the target, and stop once the relative gap
/// drops to gap_tolerance. Deterministic for identical inputs. Hitting the
/// iteration cap returns converged=false with the best iterate, not an error.
Solution solve(const Instance& instance, const SolverConfig& config = {});

/// 1 - (sum_i d_i * shortest_dist_i) / (sum_e cost_e(f_e) * f_e) under the
/// objective's costs; 0 at an exact equilibrium/optimum and for the 0/0 case.
double relative_gap(const Instance& instance, const FlowVector& flows, Objective objective);

namespace detail {

/// Exact bisection on the directional derivative
///   g(alpha) = sum_e lat_e(f_e + alpha*dir_e) * dir_e,
/// which is nondecreasing on [0,1]. Returns alpha in [0,1] with
/// |g(alpha)| <= tol*|g(0)|, or an endpoint when g does not change sign.
double exact_line_search(const std::vector<PolynomialLatency>& latencies,
                         const FlowVector& flows, const std::vector<double>& direction,
                         double tol);

}  // namespace detail

}  // namespace wardrop

#endif
