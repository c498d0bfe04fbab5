#include "wardrop/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wardrop/parallel.hpp"

namespace wardrop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

InequalityCheck make_check(double lhs, double rhs, double gap_tolerance) {
    InequalityCheck c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    double tol = 10.0 * gap_tolerance * std::max(std::abs(lhs), std::abs(rhs));
    if (tol == 0.0) tol = 1e-12;
    c.holds = !(c.slack < -tol);
    return c;
}

}  // namespace

bool BoundReport::all_hold() const {
    return thm1.holds && thm3.holds && thm4.holds && thm5_lo.holds && thm5_hi.holds &&
           thm6_lo.holds && thm6_hi.holds && thm7_lo.holds && thm7_hi.holds;
}

double poa_upper_cap(int p) {
    if (p < 0) throw std::domain_error("p >= 0 required");
    if (p == 0) return 1.0;
    const double t = std::pow(static_cast<double>(p) + 1.0, 1.0 + 1.0 / static_cast<double>(p));
    return t / (t - static_cast<double>(p));
}

double effective_epsilon_max(int p) {
    if (p < 1) throw std::domain_error("p >= 1 required");
    return std::pow(poa_upper_cap(p), 1.0 / static_cast<double>(p)) - 1.0;
}

double christodoulou_constant(int p) {
    if (p < 0) throw std::domain_error("p >= 0 required");
    if (p == 0) return 0.0;
    return static_cast<double>(p) /
           std::pow(static_cast<double>(p) + 1.0, 1.0 + 1.0 / static_cast<double>(p));
}

double christodoulou_check(const PolynomialLatency& latency, double f, double fp, int p) {
    return christodoulou_constant(p) * latency.value(f) * f + latency.value(fp) * fp -
           latency.value(f) * fp;
}

double dafermos_lhs(const Instance& instance_low, std::span<const double> mu_low,
                    std::span<const double> mu_high, double epsilon) {
    const auto& commodities = instance_low.commodities();
    if (mu_low.size() != commodities.size() || mu_high.size() != commodities.size())
        throw std::invalid_argument("mu length does not match commodity count");
    double acc = 0.0;
    for (size_t i = 0; i < commodities.size(); ++i) {
        const double d = commodities[i].demand;
        if (d <= 0.0) continue;
        acc += (mu_high[i] - mu_low[i]) * d;
    }
    return epsilon * acc;
}

PoaResult price_of_anarchy(const Instance& instance, const SolverConfig& config) {
    PoaResult out;
    SolverConfig ue_config = config, so_config = config;
    ue_config.objective = Objective::UserEquilibrium;
    so_config.objective = Objective::SystemOptimum;
    Solution solutions[2];
    parallel_for(2, [&](int i) {
        solutions[i] = solve(instance, i == 0 ? ue_config : so_config);
    });
    out.ue = std::move(solutions[0]);
    out.so = std::move(solutions[1]);
    out.rho = out.so.total_cost > 0.0 ? out.ue.total_cost / out.so.total_cost : 1.0;
    return out;
}

PairSolutions solve_pair(const Instance& instance, double epsilon, const SolverConfig& config) {
    if (!(epsilon >= 0.0)) throw std::domain_error("epsilon >= 0 required");
    const Instance scaled = scale_demands(instance, epsilon);
    PairSolutions pair;
    Solution* slots[4] = {&pair.ue_low, &pair.ue_high, &pair.so_low, &pair.so_high};
    parallel_for(4, [&](int i) {
        SolverConfig c = config;
        c.objective = i < 2 ? Objective::UserEquilibrium : Objective::SystemOptimum;
        *slots[i] = solve(i % 2 == 0 ? instance : scaled, c);
    });
    return pair;
}

BoundReport make_bound_report(const Instance& instance_low, double epsilon,
                              const PairSolutions& pair, const SolverConfig& config) {
    BoundReport r;
    r.epsilon = epsilon;
    r.p = instance_low.degree();
    r.C_f = pair.ue_low.total_cost;
    r.C_fp = pair.ue_high.total_cost;
    r.C_opt = pair.so_low.total_cost;
    r.C_opt_p = pair.so_high.total_cost;
    r.rho = r.C_opt > 0.0 ? r.C_f / r.C_opt : 1.0;
    r.rho_p = r.C_opt_p > 0.0 ? r.C_fp / r.C_opt_p : 1.0;
    r.dafermos_lhs = dafermos_lhs(instance_low, pair.ue_low.mu, pair.ue_high.mu, epsilon);
    r.all_converged = pair.ue_low.converged && pair.ue_high.converged && pair.so_low.converged &&
                      pair.so_high.converged;

    const double tol = config.gap_tolerance;
    const double growth = 1.0 + epsilon;
    const double pd = static_cast<double>(r.p);

    r.thm1 = epsilon > 0.0 ? make_check(r.C_f, r.C_opt_p / epsilon, tol)
                           : InequalityCheck{r.C_f, kInf, kInf, true};
    r.thm3 = make_check(r.C_f, r.C_opt_p / (growth - christodoulou_constant(r.p)), tol);
    r.thm4 = make_check(0.0, r.dafermos_lhs, tol);
    r.thm5_lo = make_check(growth * r.C_opt, r.C_opt_p, tol);
    r.thm5_hi = make_check(r.C_opt_p, std::pow(growth, pd + 1.0) * r.C_opt, tol);
    r.thm6_lo = make_check(growth * r.C_f, r.C_fp, tol);
    r.thm6_hi = make_check(r.C_fp, std::pow(growth, pd + 1.0) * r.C_f, tol);
    const double ratio = r.rho > 0.0 ? r.rho_p / r.rho : 1.0;
    r.thm7_lo = make_check(std::pow(growth, -pd), ratio, tol);
    r.thm7_hi = make_check(ratio, std::pow(growth, pd), tol);
    return r;
}

BoundReport check_pair(const Instance& instance, double epsilon, const SolverConfig& config) {
    return make_bound_report(instance, epsilon, solve_pair(instance, epsilon, config), config);
}

std::vector<SweepRecord> sweep(const Instance& instance, double epsilon, int steps,
                               const SolverConfig& config) {
    if (steps < 1) throw std::invalid_argument("steps >= 1 required");
    if (!(epsilon > 0.0)) throw std::domain_error("epsilon > 0 required");

    // Demand levels 0..steps, each built from its predecessor.
    std::vector<Instance> levels;
    levels.reserve(static_cast<size_t>(steps) + 1);
    levels.push_back(instance);
    for (int j = 1; j <= steps; ++j) levels.push_back(scale_demands(levels.back(), epsilon));

    const int n = steps + 1;
    std::vector<Solution> ue(static_cast<size_t>(n)), so(static_cast<size_t>(n));
    parallel_for(2 * n, [&](int i) {
        SolverConfig c = config;
        c.objective = i < n ? Objective::UserEquilibrium : Objective::SystemOptimum;
        const size_t level = static_cast<size_t>(i % n);
        (i < n ? ue : so)[level] = solve(levels[level], c);
    });

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepRecord> records(static_cast<size_t>(n));
    double multiplier = 1.0;
    for (int j = 0; j < n; ++j) {
        SweepRecord& rec = records[static_cast<size_t>(j)];
        rec.step = j;
        rec.multiplier = multiplier;
        multiplier *= 1.0 + epsilon;
        rec.ue_cost = ue[static_cast<size_t>(j)].total_cost;
        rec.so_cost = so[static_cast<size_t>(j)].total_cost;
        rec.poa = rec.so_cost > 0.0 ? rec.ue_cost / rec.so_cost : 1.0;
        rec.converged =
            ue[static_cast<size_t>(j)].converged && so[static_cast<size_t>(j)].converged;
        if (j == 0) {
            rec.poa_ratio = nan;
            rec.thm5_lo_slack = rec.thm5_hi_slack = nan;
            rec.thm6_lo_slack = rec.thm6_hi_slack = nan;
            rec.thm7_lo_slack = rec.thm7_hi_slack = nan;
            rec.dafermos_lhs = nan;
            continue;
        }
        PairSolutions pair{ue[static_cast<size_t>(j) - 1], ue[static_cast<size_t>(j)],
                           so[static_cast<size_t>(j) - 1], so[static_cast<size_t>(j)]};
        const BoundReport report =
            make_bound_report(levels[static_cast<size_t>(j) - 1], epsilon, pair, config);
        rec.poa_ratio = report.rho > 0.0 ? report.rho_p / report.rho : 1.0;
        rec.thm5_lo_slack = report.thm5_lo.slack;
        rec.thm5_hi_slack = report.thm5_hi.slack;
        rec.thm6_lo_slack = report.thm6_lo.slack;
        rec.thm6_hi_slack = report.thm6_hi.slack;
        rec.thm7_lo_slack = report.thm7_lo.slack;
        rec.thm7_hi_slack = report.thm7_hi.slack;
        rec.dafermos_lhs = report.dafermos_lhs;
    }
    return records;
}

double default_flow_tolerance(const Instance& instance) {
    double max_demand = 0.0;
    for (const Commodity& c : instance.commodities())
        max_demand = std::max(max_demand, c.demand);
    return 1e-6 * max_demand;
}

TightnessDiagnostic tightness_diagnostics(int lemma, const Instance& instance,
                                          const Solution& ue_low, const Solution& ue_high,
                                          const Solution& so_low, const Solution& so_high,
                                          double flow_tol) {
    if (lemma < 5 || lemma > 8) throw std::invalid_argument("lemma id must be 5, 6, 7 or 8");
    if (!(flow_tol > 0.0)) throw std::invalid_argument("flow_tol must be > 0");

    TightnessDiagnostic diag;
    diag.lemma = lemma;
    const auto& edges = instance.network().edges();
    const int p = instance.degree();

    auto has_top_term = [&](const PolynomialLatency& lat) {
        const auto coeffs = lat.coefficients();
        return static_cast<int>(coeffs.size()) > p && coeffs[static_cast<size_t>(p)] > 0.0;
    };

    for (size_t e = 0; e < edges.size(); ++e) {
        const PolynomialLatency& lat = edges[e].latency;
        bool offends = false;
        std::string reason;
        switch (lemma) {
            case 5:
                if (so_high.flows[e] > flow_tol && !lat.is_constant()) {
                    offends = true;
                    reason = "used by the scaled optimum but latency is not constant (degree " +
                             std::to_string(lat.degree()) + ")";
                }
                break;
            case 6:
                if ((ue_low.flows[e] > flow_tol || ue_high.flows[e] > flow_tol) &&
                    !has_top_term(lat)) {
                    offends = true;
                    reason = "used by an equilibrium but latency has no degree-" +
                             std::to_string(p) + " term";
                }
                break;
            case 7:
                if (so_low.flows[e] > flow_tol && !has_top_term(lat)) {
                    offends = true;
                    reason = "used by the base optimum but latency has no degree-" +
                             std::to_string(p) + " term";
                }
                break;
            case 8:
                if (std::abs(ue_high.flows[e] - ue_low.flows[e]) > flow_tol &&
                    !lat.is_constant()) {
                    offends = true;
                    reason = "equilibrium flow moved but latency is not constant (degree " +
                             std::to_string(lat.degree()) + ")";
                }
                break;
            default:
                break;
        }
        if (offends) diag.offending_edges.emplace_back(static_cast<int>(e), std::move(reason));
    }
    diag.bound_attainable = diag.offending_edges.empty();
    return diag;
}

}  // namespace wardrop
