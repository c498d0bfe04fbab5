#ifndef WARDROP_SENSITIVITY_HPP
#define WARDROP_SENSITIVITY_HPP

#include <string>
#include <utility>
#include <vector>

#include "wardrop/model.hpp"
#include "wardrop/solver.hpp"

namespace wardrop {

/// One inequality lhs <= rhs; slack = rhs - lhs, so slack >= 0 means it holds
/// exactly. `holds` allows a slack down to -10*gap_tolerance*max(|lhs|,|rhs|)
/// (absolute fallback 1e-12 when both sides are zero).
struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = true;
};

/// Every cost bound evaluated on a pair of instances with demands d and
/// (1+epsilon)d. Naming follows the emitted column schema: thm1/thm3 bound the
/// base equilibrium cost by the scaled optimum, thm4 is the latency-demand
/// monotonicity sum, thm5/thm6 are the optimal/equilibrium cost sandwiches,
/// thm7 is the PoA ratio band.
struct BoundReport {
    double epsilon = 0.0;
    int p = 0;
    double C_f = 0.0;      // equilibrium cost, base demands
    double C_fp = 0.0;     // equilibrium cost, scaled demands
    double C_opt = 0.0;    // optimal cost, base demands
    double C_opt_p = 0.0;  // optimal cost, scaled demands
    double rho = 1.0;      // C_f / C_opt
    double rho_p = 1.0;    // C_fp / C_opt_p
    double dafermos_lhs = 0.0;

    InequalityCheck thm1;     // C(f) <= C'_opt / epsilon (vacuous at epsilon=0)
    InequalityCheck thm3;     // C(f) <= C'_opt / ((1+eps) - p/(p+1)^(1+1/p))
    InequalityCheck thm4;     // dafermos_lhs >= 0
    InequalityCheck thm5_lo;  // (1+eps)   * C_opt <= C'_opt
    InequalityCheck thm5_hi;  // C'_opt <= (1+eps)^(p+1) * C_opt
    InequalityCheck thm6_lo;  // (1+eps)   * C(f) <= C(f')
    InequalityCheck thm6_hi;  // C(f') <= (1+eps)^(p+1) * C(f)
    InequalityCheck thm7_lo;  // (1+eps)^-p <= rho'/rho
    InequalityCheck thm7_hi;  // rho'/rho <= (1+eps)^p

    bool all_converged = true;  // every underlying solve hit its gap tolerance
    bool all_hold() const;
};

/// UE and SO solutions at base and (1+epsilon)-scaled demands.
struct PairSolutions {
    Solution ue_low, ue_high, so_low, so_high;
};

struct PoaResult {
    double rho = 1.0;
    Solution ue, so;
};

/// One row of a demand-scaling sweep. Step 0 is the base instance and carries
/// NaN in the pair fields (ratio, slacks, dafermos).
struct SweepRecord {
    int step = 0;
    double multiplier = 1.0;  // product of (1+epsilon) applied so far
    double ue_cost = 0.0;
    double so_cost = 0.0;
    double poa = 1.0;
    double poa_ratio = 0.0;  // rho(step)/rho(step-1)
    double thm5_lo_slack = 0.0;
    double thm5_hi_slack = 0.0;
    double thm6_lo_slack = 0.0;
    double thm6_hi_slack = 0.0;
    double thm7_lo_slack = 0.0;
    double thm7_hi_slack = 0.0;
    double dafermos_lhs = 0.0;
    bool converged = true;  // both solves at this demand level
};

/// Necessary-condition audit for attaining a sandwich bound exactly.
///   5: edges used by the scaled optimum must have constant latency
///      (else the lower bound of the optimal-cost sandwich is unattainable);
///   6: edges used by either equilibrium must have a degree-p term
///      (else the upper bound of the equilibrium-cost sandwich is unattainable);
///   7: edges used by the base optimum must have a degree-p term
///      (else the upper bound of the optimal-cost sandwich is unattainable);
///   8: edges whose equilibrium flow moved must have constant latency
///      (else the lower bound of the equilibrium-cost sandwich is unattainable).
struct TightnessDiagnostic {
    int lemma = 0;
    std::vector<std::pair<int, std::string>> offending_edges;
    bool bound_attainable = true;
};

/// (p+1)^(1+1/p) / ((p+1)^(1+1/p) - p), the universal PoA cap for degree-p
/// polynomial latencies; 1 at p=0.
double poa_upper_cap(int p);

/// Largest epsilon for which the (1+eps)^p ratio band can still be tight:
/// poa_upper_cap(p)^(1/p) - 1. Throws std::domain_error for p < 1.
double effective_epsilon_max(int p);

/// p / (p+1)^(1+1/p); 0 at p=0.
double christodoulou_constant(int p);

/// Slack of the per-edge product inequality
///   l(f)*fp <= christodoulou_constant(p)*l(f)*f + l(fp)*fp;
/// nonnegative for any polynomial latency of degree <= p with nonnegative
/// coefficients and any f, fp >= 0.
double christodoulou_check(const PolynomialLatency& latency, double f, double fp, int p);

/// epsilon * sum_i (mu_high[i] - mu_low[i]) * d_i, the monotonicity sum for the
/// demand change d -> (1+epsilon)d. Zero-demand commodities contribute nothing.
double dafermos_lhs(const Instance& instance_low, std::span<const double> mu_low,
                    std::span<const double> mu_high, double epsilon);

/// rho = C(ue)/C(so); 1 by convention when C(so)=0. Non-convergence is
/// reported through the embedded solutions, not an error.
PoaResult price_of_anarchy(const Instance& instance, const SolverConfig& config = {});

/// Four independent solves (UE/SO at both demand levels), run concurrently
/// when workers are available.
PairSolutions solve_pair(const Instance& instance, double epsilon, const SolverConfig& config);

/// Evaluates every bound on an already-solved pair.
BoundReport make_bound_report(const Instance& instance_low, double epsilon,
                              const PairSolutions& pair, const SolverConfig& config);

/// solve_pair + make_bound_report. Throws std::domain_error for epsilon < 0.
BoundReport check_pair(const Instance& instance, double epsilon, const SolverConfig& config = {});

/// Demand-scaling sweep: level j has demands multiplied by (1+epsilon)^j for
/// j = 0..steps; each record past the first checks every bound against its
/// predecessor. Levels are solved independently (no warm starts) so records
/// are reproducible in isolation.
std::vector<SweepRecord> sweep(const Instance& instance, double epsilon, int steps,
                               const SolverConfig& config = {});

/// `flow_tol` classifies an edge as used (flow > flow_tol) or repositioned
/// (|f'_e - f_e| > flow_tol). Throws std::invalid_argument for an unknown
/// lemma id.
TightnessDiagnostic tightness_diagnostics(int lemma, const Instance& instance,
                                          const Solution& ue_low, const Solution& ue_high,
                                          const Solution& so_low, const Solution& so_high,
                                          double flow_tol);

/// 1e-6 times the largest commodity demand.
double default_flow_tolerance(const Instance& instance);

}  // namespace wardrop

#endif
