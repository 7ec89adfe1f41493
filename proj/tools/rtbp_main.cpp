#include "rtbp/compare.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/numfmt.hpp"
#include "rtbp/scenario_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <vector>

namespace {

using namespace rtbp;

// exit codes: 0 ok, 1 malformed scenario / io, 2 solvability or domain
// failure at construction, 3 runtime breakdown, 4 validity gate false
constexpr int kExitOk = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitSolvability = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitGate = 4;

ScenarioFile load_or_exit(const std::string& path) {
    ScenarioFile sf = load_scenario_file(path);
    std::vector<std::string> warnings;
    validate(sf.scenario, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return sf;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<ClosedFormSample>& rows) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << "t,r1,theta1,r2,theta2,r3,theta3,x1,y1,x2,y2,x3,y3\n";
    for (const auto& s : rows) {
        os << fmt_g17(s.t) << ',' << fmt_g17(s.r1) << ',' << fmt_g17(s.theta1) << ','
           << fmt_g17(s.r2) << ',' << fmt_g17(s.theta2) << ',' << fmt_g17(s.r3) << ','
           << fmt_g17(s.theta3);
        const double xs[6] = {s.r1 * std::cos(s.theta1), s.r1 * std::sin(s.theta1),
                              s.r2 * std::cos(s.theta2), s.r2 * std::sin(s.theta2),
                              s.r3 * std::cos(s.theta3), s.r3 * std::sin(s.theta3)};
        for (double v : xs) os << ',' << fmt_g17(v);
        os << '\n';
    }
}

std::vector<ClosedFormSample> oracle_rows(const ScenarioFile& sf) {
    DerivedConstants dc = derive_constants(sf.scenario);
    oracle::Masses masses{sf.scenario.m1, sf.scenario.m2, sf.scenario.m3};
    auto traj = oracle::integrate(oracle_initial_state(dc, sf.scenario), masses,
                                  sf.scenario.G, sf.integrator, sf.scenario.t_end,
                                  sf.scenario.dt_out);
    std::vector<ClosedFormSample> rows;
    rows.reserve(traj.size());
    double th_prev[3] = {sf.scenario.theta1o, sf.scenario.theta2o, 0.0};
    bool first = true;
    for (const auto& smp : traj) {
        ClosedFormSample row;
        row.t = smp.state.t;
        const auto& p = smp.state.pos;
        row.r1 = oracle::norm(p[0]);
        row.r2 = oracle::norm(p[1]);
        row.r3 = oracle::norm(p[2]);
        double th[3] = {std::atan2(p[0].y, p[0].x), std::atan2(p[1].y, p[1].x),
                        std::atan2(p[2].y, p[2].x)};
        if (first) th_prev[2] = th[2];
        for (int i = 0; i < 3; ++i) {
            double two_pi = 2.0 * std::numbers::pi;
            th[i] += two_pi * std::round((th_prev[i] - th[i]) / two_pi);
            th_prev[i] = th[i];
        }
        first = false;
        row.theta1 = th[0];
        row.theta2 = th[1];
        row.theta3 = th[2];
        rows.push_back(row);
    }
    return rows;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix);
    out += p.extension();
    return out.string();
}

int cmd_simulate(const std::string& scenario_path, const std::string& output_path,
                 const std::string& method) {
    ScenarioFile sf = load_or_exit(scenario_path);
    if (method == "closed" || method == "both") {
        DerivedConstants dc = derive_constants(sf.scenario);
        auto rows = sample_closed_form(dc, sf.scenario);
        write_trajectory_csv(method == "both" ? with_suffix(output_path, "_closed")
                                              : output_path,
                             rows);
    }
    if (method == "oracle" || method == "both") {
        auto rows = oracle_rows(sf);
        write_trajectory_csv(method == "both" ? with_suffix(output_path, "_oracle")
                                              : output_path,
                             rows);
    }
    return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const std::string& outdir) {
    ScenarioFile sf = load_or_exit(scenario_path);
    auto [series, summary] = run_comparison(sf.scenario, sf.integrator);
    if (summary.empty_window) std::cerr << "warning: " << summary.notes << "\n";
    std::filesystem::create_directories(outdir);
    {
        std::ofstream os(std::filesystem::path(outdir) / "errors.csv");
        if (!os) throw ConfigError("cannot open errors.csv under " + outdir);
        write_error_series_csv(os, series);
    }
    {
        std::ofstream os(std::filesystem::path(outdir) / "summary.txt");
        if (!os) throw ConfigError("cannot open summary.txt under " + outdir);
        write_summary(os, summary);
    }
    return kExitOk;
}

int cmd_check(const std::string& scenario_path) {
    ScenarioFile sf = load_or_exit(scenario_path);
    DerivedConstants dc = derive_constants(sf.scenario);
    ValidityReport rep = check_validity(sf.scenario, dc);
    std::cout << "b_positive=" << (rep.b_positive ? 1 : 0) << "\n"
              << "theta_rate_ok=" << (rep.theta_rate_ok ? 1 : 0) << "\n"
              << "radius_ok=" << (rep.radius_ok ? 1 : 0) << "\n"
              << "binomial_margin=" << fmt_g17(rep.binomial_margin) << "\n"
              << "overall=" << (rep.overall ? 1 : 0) << "\n";
    return rep.overall ? kExitOk : kExitGate;
}

int cmd_lambertw(int branch, double x) {
    WResult res = w_eval(branch == 0 ? WBranch::Principal : WBranch::Lower, x);
    std::cout << "value=" << fmt_g17(res.value) << "\n"
              << "residual=" << fmt_g17(res.residual) << "\n"
              << "iterations=" << res.iterations << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form restricted three-body approximations with an ODE oracle"};
    app.require_subcommand(1);

    std::string scenario_path, output_path = "trajectory.csv", outdir = ".", method = "closed";
    int branch = 0;
    double x = 0.0;

    auto* sim = app.add_subcommand("simulate", "evaluate trajectories to CSV");
    sim->add_option("scenario", scenario_path, "scenario file")->required();
    sim->add_option("-o,--output", output_path, "output CSV path");
    sim->add_option("--method", method, "closed | oracle | both")
        ->check(CLI::IsMember({"closed", "oracle", "both"}));

    auto* cmp = app.add_subcommand("compare", "score closed forms against the oracle");
    cmp->add_option("scenario", scenario_path, "scenario file")->required();
    cmp->add_option("-o,--outdir", outdir, "output directory (errors.csv, summary.txt)");

    auto* chk = app.add_subcommand("check", "evaluate the validity gate");
    chk->add_option("scenario", scenario_path, "scenario file")->required();

    auto* lw = app.add_subcommand("lambertw", "evaluate the Lambert W function");
    lw->add_option("--branch", branch, "0 (principal) or -1 (lower)")
        ->check(CLI::IsMember({0, -1}));
    lw->add_option("x", x, "argument")->required();

    auto* sch = app.add_subcommand("schema", "print the scenario file schema");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(scenario_path, output_path, method);
        if (cmp->parsed()) return cmd_compare(scenario_path, outdir);
        if (chk->parsed()) return cmd_check(scenario_path);
        if (lw->parsed()) return cmd_lambertw(branch, x);
        if (sch->parsed()) {
            std::cout << rtbp::scenario_schema_text();
            return kExitOk;
        }
    } catch (const rtbp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const rtbp::SolvabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolvability;
    } catch (const rtbp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolvability;
    } catch (const rtbp::DegenerateOrbitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolvability;
    } catch (const rtbp::Error& e) {
        // singularity, collision, breakdown, step limit: runtime class
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
