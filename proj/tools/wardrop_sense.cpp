// Command-line front end: parse TNTP instances (or generate the builtin
// examples), solve user-equilibrium / system-optimum flows, run demand-scaling
// sweeps, and check the cost bounds on scaled instance pairs.
//
// Exit codes: 0 success, 1 input/usage error, 2 solver non-convergence
// (solve), 3 bound violation (check).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wardrop/examples.hpp"
#include "wardrop/report_io.hpp"
#include "wardrop/sensitivity.hpp"
#include "wardrop/solver.hpp"
#include "wardrop/tntp.hpp"
#include "wardrop/version.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
    std::string net_path;
    std::string trips_path;
    std::string example;  // "pigou" or "two-commodity" instead of files
    int pigou_p = 4;
    double two_commodity_k = 2.0;
    double gap_tol = 1e-8;
    int max_iter = 20000;
    std::string direction = "sd";
    std::vector<int> od;         // origin destination, 1-based
    double od_demand = -1.0;     // demand for the --od commodity
    double demand_scale = -1.0;  // multiply all demands first
    std::string out_path;
    std::string format = "csv";
};

void add_solver_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--gap-tol", opt.gap_tol, "relative gap tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", opt.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--direction", opt.direction,
                    "search direction: sd (default), cfw, or fw")
        ->check(CLI::IsMember({"fw", "cfw", "sd"}));
}

void add_instance_flags(CLI::App* cmd, CommonOptions& opt, bool with_example) {
    cmd->add_option("--net", opt.net_path, "TNTP net file");
    cmd->add_option("--trips", opt.trips_path, "TNTP trips file");
    if (with_example) {
        cmd->add_option("--example", opt.example, "builtin example instead of files")
            ->check(CLI::IsMember({"pigou", "two-commodity"}));
        cmd->add_option("--p", opt.pigou_p, "pigou latency degree")->check(CLI::PositiveNumber);
        cmd->add_option("--k", opt.two_commodity_k, "two-commodity demand parameter");
    }
}

void add_restriction_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--od", opt.od, "restrict to one origin-destination pair (1-based ids)")
        ->expected(2);
    cmd->add_option("--demand", opt.od_demand, "demand for the --od commodity");
    cmd->add_option("--demand-scale", opt.demand_scale,
                    "multiply every demand by this factor first");
}

wardrop::SolverConfig solver_config(const CommonOptions& opt) {
    wardrop::SolverConfig config;
    config.gap_tolerance = opt.gap_tol;
    config.max_iterations = opt.max_iter;
    config.direction = opt.direction == "fw"    ? wardrop::DirectionRule::FrankWolfe
                       : opt.direction == "cfw" ? wardrop::DirectionRule::ConjugateFrankWolfe
                                                : wardrop::DirectionRule::SimplicialDecomposition;
    return config;
}

wardrop::Instance build_instance(const CommonOptions& opt) {
    std::optional<wardrop::Instance> instance;
    if (!opt.example.empty()) {
        if (opt.example == "pigou")
            instance = wardrop::gen_pigou({opt.pigou_p, 1.0});
        else
            instance = wardrop::gen_two_commodity({opt.two_commodity_k});
    } else {
        if (opt.net_path.empty() || opt.trips_path.empty())
            throw std::runtime_error("--net and --trips are required (or --example)");
        instance = wardrop::load_instance(opt.net_path, opt.trips_path);
    }

    if (!opt.od.empty()) {
        if (opt.od_demand < 0.0)
            throw std::runtime_error("--od requires an explicit --demand");
        std::vector<wardrop::Commodity> one{{opt.od[0] - 1, opt.od[1] - 1, opt.od_demand}};
        instance = wardrop::Instance(instance->network(), std::move(one));
    } else if (opt.od_demand >= 0.0) {
        if (opt.example != "pigou")
            throw std::runtime_error("--demand without --od needs the single-commodity pigou example");
        std::vector<wardrop::Commodity> one = instance->commodities();
        one[0].demand = opt.od_demand;
        instance = wardrop::Instance(instance->network(), std::move(one));
    }

    if (opt.demand_scale >= 0.0) {
        if (!(opt.demand_scale > 0.0)) throw std::runtime_error("--demand-scale must be > 0");
        std::vector<wardrop::Commodity> scaled = instance->commodities();
        for (auto& c : scaled) c.demand *= opt.demand_scale;
        instance = wardrop::Instance(instance->network(), std::move(scaled));
    }
    return *std::move(instance);
}

json manifest_base(const std::string& subcommand, const CommonOptions& opt) {
    json m;
    m["tool"] = wardrop::kToolName;
    m["version"] = wardrop::kToolVersion;
    m["subcommand"] = subcommand;
    json inputs;
    if (!opt.net_path.empty()) inputs["net"] = opt.net_path;
    if (!opt.trips_path.empty()) inputs["trips"] = opt.trips_path;
    if (!opt.example.empty()) inputs["example"] = opt.example;
    m["inputs"] = inputs;
    m["solver"] = {{"gap_tolerance", opt.gap_tol},
                   {"max_iterations", opt.max_iter},
                   {"direction", opt.direction}};
    json params;
    if (!opt.od.empty()) params["od"] = opt.od;
    if (opt.od_demand >= 0.0) params["demand"] = opt.od_demand;
    if (opt.demand_scale >= 0.0) params["demand_scale"] = opt.demand_scale;
    if (!opt.example.empty()) {
        if (opt.example == "pigou") params["p"] = opt.pigou_p;
        else params["k"] = opt.two_commodity_k;
    }
    m["parameters"] = params;
    return m;
}

// Output goes to --out when given (with a manifest alongside), else stdout.
void emit(const std::string& artifact, const CommonOptions& opt, json manifest,
          std::chrono::steady_clock::time_point started) {
    if (opt.out_path.empty()) {
        std::cout << artifact;
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + opt.out_path + " for writing");
    out << artifact;
    if (!out.flush()) throw std::runtime_error("write failed: " + opt.out_path);
    manifest["output"] = opt.out_path;
    manifest["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream mout(opt.out_path + ".manifest.json", std::ios::binary);
    mout << manifest.dump(2) << "\n";
}

int cmd_solve(const CommonOptions& opt, const std::string& objective) {
    const auto started = std::chrono::steady_clock::now();
    const wardrop::Instance instance = build_instance(opt);
    wardrop::SolverConfig config = solver_config(opt);
    config.objective = objective == "so" ? wardrop::Objective::SystemOptimum
                                         : wardrop::Objective::UserEquilibrium;
    const wardrop::Solution solution = wardrop::solve(instance, config);

    std::string artifact;
    if (opt.format == "json") {
        artifact = wardrop::solution_to_json(solution, instance, config.objective).dump(2) + "\n";
    } else {
        std::ostringstream csv;
        char buf[64];
        csv << "metric,value\n";
        csv << "objective," << objective << "\n";
        csv << "converged," << (solution.converged ? 1 : 0) << "\n";
        csv << "iterations," << solution.iterations << "\n";
        auto real = [&](double v) {
            std::snprintf(buf, sizeof(buf), "%.12g", v);
            return std::string(buf);
        };
        csv << "relative_gap," << real(solution.relative_gap) << "\n";
        csv << "objective_value," << real(solution.objective_value) << "\n";
        csv << "total_cost," << real(solution.total_cost) << "\n";
        const auto& commodities = instance.commodities();
        for (size_t i = 0; i < commodities.size(); ++i) {
            csv << "mu[" << commodities[i].origin + 1 << "->" << commodities[i].destination + 1
                << "]," << real(solution.mu[i]) << "\n";
        }
        artifact = csv.str();
    }
    json manifest = manifest_base("solve", opt);
    manifest["parameters"]["objective"] = objective;
    emit(artifact, opt, std::move(manifest), started);
    if (!solution.converged) {
        std::cerr << "did not reach gap " << opt.gap_tol << " within " << opt.max_iter
                  << " iterations (gap " << solution.relative_gap << ")\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const CommonOptions& opt, double eps, int steps) {
    const auto started = std::chrono::steady_clock::now();
    const wardrop::Instance instance = build_instance(opt);
    const auto records = wardrop::sweep(instance, eps, steps, solver_config(opt));

    for (const auto& r : records)
        if (!r.converged)
            std::cerr << "step " << r.step << ": solver did not converge\n";

    std::string artifact;
    if (opt.format == "json") {
        artifact = wardrop::sweep_to_json(records).dump(2) + "\n";
    } else {
        std::ostringstream csv;
        wardrop::write_sweep_csv(records, csv);
        artifact = csv.str();
    }
    json manifest = manifest_base("sweep", opt);
    manifest["parameters"]["eps"] = eps;
    manifest["parameters"]["steps"] = steps;
    std::vector<int> failed;
    for (const auto& r : records)
        if (!r.converged) failed.push_back(r.step);
    if (!failed.empty()) manifest["non_converged_steps"] = failed;
    emit(artifact, opt, std::move(manifest), started);
    return 0;
}

int cmd_check(const CommonOptions& opt, double eps, const std::string& eps_grid, bool as_json) {
    const auto started = std::chrono::steady_clock::now();
    const wardrop::Instance instance = build_instance(opt);
    const wardrop::SolverConfig config = solver_config(opt);

    std::vector<double> grid;
    if (!eps_grid.empty()) {
        double start = 0.0, stop = 0.0;
        int count = 0;
        char sep1 = 0, sep2 = 0;
        std::istringstream in(eps_grid);
        in >> start >> sep1 >> stop >> sep2 >> count;
        if (!in || sep1 != ':' || sep2 != ':' || count < 1 || start < 0.0 || stop < start)
            throw std::runtime_error("--eps-grid expects START:STOP:COUNT with 0 <= START <= STOP");
        for (int i = 0; i < count; ++i)
            grid.push_back(count == 1 ? start
                                      : start + (stop - start) * static_cast<double>(i) /
                                                    static_cast<double>(count - 1));
    } else {
        grid.push_back(eps);
    }

    std::vector<wardrop::BoundReport> reports;
    reports.reserve(grid.size());
    for (double e : grid) reports.push_back(wardrop::check_pair(instance, e, config));

    bool all_hold = true;
    for (const auto& r : reports) all_hold = all_hold && r.all_hold();

    std::string artifact;
    if (as_json) {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(wardrop::bound_report_to_json(r));
        artifact = (grid.size() == 1 ? rows[0].dump(2) : rows.dump(2)) + "\n";
    } else if (grid.size() == 1) {
        artifact = wardrop::bound_report_table(reports[0]);
    } else {
        std::ostringstream table;
        table << "eps          rho          rho'         ratio        band_lo      band_hi      ok\n";
        char buf[160];
        for (const auto& r : reports) {
            const double ratio = r.rho > 0.0 ? r.rho_p / r.rho : 1.0;
            std::snprintf(buf, sizeof(buf), "%-12.6g %-12.10g %-12.10g %-12.10g %-12.10g %-12.10g %s\n",
                          r.epsilon, r.rho, r.rho_p, ratio,
                          std::pow(1.0 + r.epsilon, -static_cast<double>(r.p)),
                          std::pow(1.0 + r.epsilon, static_cast<double>(r.p)),
                          r.all_hold() ? "ok" : "VIOLATED");
            table << buf;
        }
        artifact = table.str();
    }

    json manifest = manifest_base("check", opt);
    if (!eps_grid.empty()) manifest["parameters"]["eps_grid"] = eps_grid;
    else manifest["parameters"]["eps"] = eps;
    emit(artifact, opt, std::move(manifest), started);
    return all_hold ? 0 : 3;
}

int cmd_gen(const CommonOptions& opt, const std::string& out_dir, double demand) {
    namespace fs = std::filesystem;
    if (opt.example.empty()) throw std::runtime_error("--example is required");
    wardrop::Instance instance = opt.example == "pigou"
                                     ? wardrop::gen_pigou({opt.pigou_p, demand})
                                     : wardrop::gen_two_commodity({opt.two_commodity_k});
    fs::create_directories(out_dir);
    const std::string stem = opt.example == "pigou" ? "pigou" : "two_commodity";
    const fs::path net_path = fs::path(out_dir) / (stem + "_net.tntp");
    const fs::path trips_path = fs::path(out_dir) / (stem + "_trips.tntp");
    {
        std::ofstream out(net_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + net_path.string());
        wardrop::write_net(instance.network(), out);
    }
    {
        std::ofstream out(trips_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + trips_path.string());
        wardrop::write_trips(instance.commodities(), out);
    }
    std::cerr << "wrote " << net_path.string() << " and " << trips_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wardrop equilibrium / system optimum solver with demand-scaling "
                 "sensitivity checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wardrop::kToolVersion));

    CommonOptions opt;

    auto* solve = app.add_subcommand("solve", "solve one assignment");
    std::string objective = "ue";
    add_instance_flags(solve, opt, true);
    solve->add_option("--objective", objective, "ue or so")
        ->check(CLI::IsMember({"ue", "so"}));
    add_solver_flags(solve, opt);
    solve->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--out", opt.out_path, "output path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "demand-scaling sweep");
    double eps = 0.1;
    int steps = 0;
    add_instance_flags(sweep, opt, true);
    sweep->add_option("--eps", eps, "demand growth per step")->required();
    sweep->add_option("--steps", steps, "number of scaling steps")->required();
    add_restriction_flags(sweep, opt);
    add_solver_flags(sweep, opt);
    sweep->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", opt.out_path, "output path (default stdout)");

    auto* check = app.add_subcommand("check", "evaluate the cost bounds for one scaling");
    double check_eps = 0.0;
    std::string eps_grid;
    bool as_json = false;
    add_instance_flags(check, opt, true);
    check->add_option("--eps", check_eps, "demand growth factor minus one");
    check->add_option("--eps-grid", eps_grid, "START:STOP:COUNT grid of eps values");
    add_restriction_flags(check, opt);
    add_solver_flags(check, opt);
    check->add_flag("--json", as_json, "emit JSON instead of the table");
    check->add_option("--out", opt.out_path, "output path (default stdout)");

    auto* gen = app.add_subcommand("gen", "write a builtin example as TNTP files");
    std::string gen_dir;
    double gen_demand = 1.0;
    gen->add_option("--example", opt.example, "pigou or two-commodity")
        ->required()
        ->check(CLI::IsMember({"pigou", "two-commodity"}));
    gen->add_option("--p", opt.pigou_p, "pigou latency degree");
    gen->add_option("--k", opt.two_commodity_k, "two-commodity demand parameter");
    gen->add_option("--demand", gen_demand, "pigou demand");
    gen->add_option("--out", gen_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opt, objective);
        if (sweep->parsed()) {
            if (!(eps > 0.0)) throw std::runtime_error("--eps must be > 0");
            if (steps < 1) throw std::runtime_error("--steps must be >= 1");
            return cmd_sweep(opt, eps, steps);
        }
        if (check->parsed()) {
            if (check_eps < 0.0) throw std::runtime_error("--eps must be >= 0");
            return cmd_check(opt, check_eps, eps_grid, as_json);
        }
        if (gen->parsed()) return cmd_gen(opt, gen_dir, gen_demand);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
