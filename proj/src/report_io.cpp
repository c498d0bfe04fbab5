#include "wardrop/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace wardrop {

const char* const kSweepCsvHeader =
    "step,multiplier,ue_cost,so_cost,poa,poa_ratio,thm5_lo_slack,thm5_hi_slack,"
    "thm6_lo_slack,thm6_hi_slack,thm7_lo_slack,thm7_hi_slack,dafermos_lhs";

namespace {

std::string real12(double v) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

nlohmann::json json_real(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return nullptr;
    return v;
}

nlohmann::json check_to_json(const InequalityCheck& c) {
    return {{"lhs", json_real(c.lhs)},
            {"rhs", json_real(c.rhs)},
            {"slack", json_real(c.slack)},
            {"holds", c.holds}};
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << kSweepCsvHeader << "\n";
    for (const SweepRecord& r : records) {
        out << r.step << ',' << real12(r.multiplier) << ',' << real12(r.ue_cost) << ','
            << real12(r.so_cost) << ',' << real12(r.poa) << ',' << real12(r.poa_ratio) << ','
            << real12(r.thm5_lo_slack) << ',' << real12(r.thm5_hi_slack) << ','
            << real12(r.thm6_lo_slack) << ',' << real12(r.thm6_hi_slack) << ','
            << real12(r.thm7_lo_slack) << ',' << real12(r.thm7_hi_slack) << ','
            << real12(r.dafermos_lhs) << "\n";
    }
    if (!out.flush()) throw std::runtime_error("sweep csv write failed");
}

nlohmann::json sweep_to_json(const std::vector<SweepRecord>& records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRecord& r : records) {
        rows.push_back({{"step", r.step},
                        {"multiplier", json_real(r.multiplier)},
                        {"ue_cost", json_real(r.ue_cost)},
                        {"so_cost", json_real(r.so_cost)},
                        {"poa", json_real(r.poa)},
                        {"poa_ratio", json_real(r.poa_ratio)},
                        {"thm5_lo_slack", json_real(r.thm5_lo_slack)},
                        {"thm5_hi_slack", json_real(r.thm5_hi_slack)},
                        {"thm6_lo_slack", json_real(r.thm6_lo_slack)},
                        {"thm6_hi_slack", json_real(r.thm6_hi_slack)},
                        {"thm7_lo_slack", json_real(r.thm7_lo_slack)},
                        {"thm7_hi_slack", json_real(r.thm7_hi_slack)},
                        {"dafermos_lhs", json_real(r.dafermos_lhs)}});
    }
    return rows;
}

nlohmann::json bound_report_to_json(const BoundReport& r) {
    return {{"epsilon", r.epsilon},
            {"p", r.p},
            {"ue_cost", json_real(r.C_f)},
            {"ue_cost_scaled", json_real(r.C_fp)},
            {"opt_cost", json_real(r.C_opt)},
            {"opt_cost_scaled", json_real(r.C_opt_p)},
            {"rho", json_real(r.rho)},
            {"rho_scaled", json_real(r.rho_p)},
            {"dafermos_lhs", json_real(r.dafermos_lhs)},
            {"all_converged", r.all_converged},
            {"all_hold", r.all_hold()},
            {"checks",
             {{"thm1", check_to_json(r.thm1)},
              {"thm3", check_to_json(r.thm3)},
              {"thm4", check_to_json(r.thm4)},
              {"thm5_lo", check_to_json(r.thm5_lo)},
              {"thm5_hi", check_to_json(r.thm5_hi)},
              {"thm6_lo", check_to_json(r.thm6_lo)},
              {"thm6_hi", check_to_json(r.thm6_hi)},
              {"thm7_lo", check_to_json(r.thm7_lo)},
              {"thm7_hi", check_to_json(r.thm7_hi)}}}};
}

std::string bound_report_table(const BoundReport& r) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "epsilon=%.12g  p=%d  %s\n", r.epsilon, r.p,
                  r.all_converged ? "" : "[solver did not converge]");
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "C(f)=%.12g  C(f')=%.12g  C_opt=%.12g  C'_opt=%.12g  rho=%.12g  rho'=%.12g\n",
                  r.C_f, r.C_fp, r.C_opt, r.C_opt_p, r.rho, r.rho_p);
    out << buf;
    auto row = [&](const char* name, const InequalityCheck& c) {
        std::snprintf(buf, sizeof(buf), "  %-8s lhs=%-16.10g rhs=%-16.10g slack=%-13.6g %s\n",
                      name, c.lhs, c.rhs, c.slack, c.holds ? "ok" : "VIOLATED");
        out << buf;
    };
    row("thm1", r.thm1);
    row("thm3", r.thm3);
    row("thm4", r.thm4);
    row("thm5_lo", r.thm5_lo);
    row("thm5_hi", r.thm5_hi);
    row("thm6_lo", r.thm6_lo);
    row("thm6_hi", r.thm6_hi);
    row("thm7_lo", r.thm7_lo);
    row("thm7_hi", r.thm7_hi);
    return std::move(out).str();
}

nlohmann::json solution_to_json(const Solution& s, const Instance& instance,
                                Objective objective) {
    nlohmann::json mu = nlohmann::json::array();
    const auto& commodities = instance.commodities();
    for (size_t i = 0; i < commodities.size(); ++i) {
        mu.push_back({{"origin", commodities[i].origin + 1},
                      {"destination", commodities[i].destination + 1},
                      {"demand", commodities[i].demand},
                      {"mu", json_real(s.mu[i])}});
    }
    return {{"objective", objective == Objective::UserEquilibrium ? "ue" : "so"},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"relative_gap", json_real(s.relative_gap)},
            {"objective_value", json_real(s.objective_value)},
            {"total_cost", json_real(s.total_cost)},
            {"commodities", mu}};
}

}  // namespace wardrop
