// Command-line front end: validate, solve, analyze, generate, check-safe-load.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lsm/analysis.hpp"
#include "lsm/catchup.hpp"
#include "lsm/errors.hpp"
#include "lsm/format.hpp"
#include "lsm/leapfrog.hpp"
#include "lsm/network_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;
constexpr int kUsage = 64;

struct RunConfig {
    std::string solver = "leapfrog";
    std::string space = "reduced";
    long mesh = 1000;
    double horizon = 0; ///< 0 keeps the file's horizon
    double rank_tol = lsm::kDefaultRankTol;
    double qp_tol = lsm::kDefaultQpTol;
    double active_tol = 1e-9;
    double stabilization_tol = 1e-10;
    double event_tol = 1e-7;
    std::string out;
    int bins = 20;
};

lsm::Problem read_problem(const std::string& path)
{
    if (path == "-")
        return lsm::read_network(std::cin);
    return lsm::load_network(path);
}

void write_file(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw lsm::Error("cannot write '" + path + "'");
    out << text;
}

int cmd_validate(const std::string& path, double rank_tol)
{
    const lsm::Problem p = read_problem(path);
    const lsm::RigidityReport r = lsm::validate_assumptions(p.lattice, rank_tol);
    const auto& L = p.lattice;
    auto yes = [](bool b) { return b ? "pass" : "fail"; };
    std::cout << "nodes = " << L.nodes() << '\n'
              << "springs = " << L.springs() << '\n'
              << "dimension = " << L.d << '\n'
              << "constraints = " << L.constraints() << '\n'
              << "zero_modes = " << r.zero_modes << '\n'
              << "self_stress_states = " << r.self_stress_states << '\n'
              << "rigid_motion_dim = " << r.rigid_motion_dim << '\n'
              << "index_residual = " << r.index_residual << '\n'
              << "kinematically_determinate = " << (r.kinematically_determinate ? "true" : "false") << '\n'
              << "statically_determinate = " << (r.statically_determinate ? "true" : "false") << '\n'
              << "dim_U = " << r.dim_U << '\n'
              << "dim_V = " << r.dim_V << '\n'
              << "assumption_1_rank_R = " << yes(r.constraints_independent) << '\n'
              << "assumption_2_kinematic_determinacy = " << yes(r.kinematically_determinate) << '\n'
              << "assumption_3_self_stress = " << yes(r.has_self_stress) << '\n';
    return r.assumptions_hold() ? kOk : kInvalid;
}

struct SolveOutput {
    std::string states, curve, events;
};

SolveOutput solve_one(const lsm::Problem& p, const RunConfig& cfg)
{
    const lsm::AssembledSystem sys = lsm::assemble(p.lattice, cfg.rank_tol);
    const lsm::Space space = cfg.space == "full" ? lsm::Space::Full : lsm::Space::Reduced;
    const lsm::MovingSetSpec spec = lsm::make_moving_set(sys, space);
    lsm::LoadSchedule loads = p.loads;
    if (cfg.horizon > 0)
        loads.horizon = cfg.horizon;
    const lsm::SweepingState s0 = lsm::initial_state(sys, spec, p.initial_stress, loads);
    lsm::Trajectory traj;
    if (cfg.solver == "catchup") {
        lsm::CatchUpOptions opt;
        opt.qp_tol = cfg.qp_tol;
        opt.event_tol = cfg.event_tol;
        traj = lsm::catchup(spec, sys.stiffness, s0, loads, lsm::TimePartition::uniform(loads.horizon, cfg.mesh),
                            opt);
    } else {
        lsm::LeapfrogOptions opt;
        opt.qp_tol = cfg.qp_tol;
        opt.active_tol = cfg.active_tol;
        opt.stabilization_tol = cfg.stabilization_tol;
        traj = lsm::leapfrog(spec, sys.stiffness, s0, loads, loads.horizon, opt);
    }
    SolveOutput out;
    std::ostringstream st, cv, ev;
    lsm::write_states_csv(st, traj, spec);
    lsm::write_curve_csv(cv, lsm::stress_curve(traj, sys, loads, sys.reference_volume));
    lsm::write_events_csv(ev, lsm::event_rows(traj.events));
    out.states = st.str();
    out.curve = cv.str();
    out.events = ev.str();
    return out;
}

void emit(const SolveOutput& o, const std::string& prefix)
{
    if (prefix.empty() || prefix == "-") {
        std::cout << o.events;
        return;
    }
    write_file(prefix + ".states.csv", o.states);
    write_file(prefix + ".curve.csv", o.curve);
    write_file(prefix + ".events.csv", o.events);
}

int cmd_solve(const std::vector<std::string>& nets, const RunConfig& cfg)
{
    if (cfg.mesh < 1)
        throw lsm::InvalidInput("--mesh must be positive");
    if (nets.size() == 1) {
        emit(solve_one(read_problem(nets.front()), cfg), cfg.out);
        return kOk;
    }
    // batch mode: one worker per file, outputs under the --out directory
    const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
    std::filesystem::create_directories(dir);
    std::mutex io;
    int status = kOk;
    std::vector<std::jthread> workers;
    for (const auto& net : nets) {
        workers.emplace_back([&, net] {
            try {
                const lsm::Problem p = read_problem(net);
                const SolveOutput o = solve_one(p, cfg);
                emit(o, (dir / std::filesystem::path(net).stem()).string());
            } catch (const std::exception& e) {
                std::lock_guard lock(io);
                std::cerr << net << ": " << e.what() << '\n';
                status = kRuntime;
            }
        });
    }
    workers.clear();
    return status;
}

int cmd_analyze(const std::string& prefix, int bins, double horizon, const std::string& out,
                const std::string& label)
{
    std::ifstream curve_in(prefix + ".curve.csv");
    if (!curve_in)
        throw lsm::SchemaError("cannot open '" + prefix + ".curve.csv'");
    std::ifstream events_in(prefix + ".events.csv");
    if (!events_in)
        throw lsm::SchemaError("cannot open '" + prefix + ".events.csv'");
    const auto curve = lsm::read_curve_csv(curve_in);
    const auto events = lsm::read_events_csv(events_in);
    if (curve.empty())
        throw lsm::SchemaError("curve file has no samples");
    const double T = horizon > 0 ? horizon : curve.back().time;
    const lsm::AnalysisReport r = lsm::macro_metrics(curve, events, T, bins, label);
    std::ostringstream os;
    lsm::write_report(os, r);
    write_file(out, os.str());
    return kOk;
}

int cmd_generate(const std::string& which, const std::string& out, bool prestressed, double r0)
{
    lsm::Problem p;
    if (which == "example1") {
        lsm::Example1Options opt;
        opt.prestressed = prestressed;
        if (r0 > 0)
            opt.r0 = r0;
        p = lsm::build_example1(opt);
    } else if (which == "grid") {
        p = lsm::build_tri_grid_with_hole();
    } else {
        p = lsm::build_periodic_tri();
    }
    std::ostringstream os;
    lsm::write_network(os, p);
    write_file(out, os.str());
    return kOk;
}

int cmd_safe_load(const std::string& path, double rank_tol)
{
    const lsm::Problem p = read_problem(path);
    const lsm::AssembledSystem sys = lsm::assemble(p.lattice, rank_tol);
    const lsm::Index nd = sys.dims.n * sys.dims.d;
    std::vector<double> times{0.0};
    for (const auto& f : p.loads.force)
        times.push_back(f.time);
    bool ok = true;
    for (double t : times) {
        const bool safe = lsm::safe_load_check(sys, p.loads.force_at(t, nd));
        std::cout << "t = " << lsm::format_double(t) << ": " << (safe ? "safe" : "violated") << '\n';
        ok = ok && safe;
    }
    std::cout << "safe_load = " << (ok ? "true" : "false") << '\n';
    return ok ? kOk : kInvalid;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quasistatic stress evolution of elastic-perfectly-plastic spring lattices"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string net;
    auto* validate = app.add_subcommand("validate", "Rigidity report and assumption checks");
    validate->add_option("network", net, "Network file ('-' for stdin)")->required();
    validate->add_option("--rank-tol", cfg.rank_tol, "Relative rank tolerance");

    std::vector<std::string> nets;
    auto* solve = app.add_subcommand("solve", "Integrate the sweeping process");
    solve->add_option("network", nets, "Network file(s); several run in parallel")->required();
    solve->add_option("--solver", cfg.solver, "catchup or leapfrog")
        ->check(CLI::IsMember({"catchup", "leapfrog"}));
    solve->add_option("--space", cfg.space, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
    solve->add_option("--mesh", cfg.mesh, "Catch-up steps on [0, T]");
    solve->add_option("--horizon", cfg.horizon, "Override the horizon T");
    solve->add_option("--out", cfg.out, "Output prefix (directory in batch mode)");
    solve->add_option("--rank-tol", cfg.rank_tol, "Relative rank tolerance");
    solve->add_option("--qp-tol", cfg.qp_tol, "Projection tolerance");
    solve->add_option("--active-tol", cfg.active_tol, "Bound activity tolerance (leapfrog)");
    solve->add_option("--stabilization-tol", cfg.stabilization_tol, "Relative velocity threshold (leapfrog)");
    solve->add_option("--event-tol", cfg.event_tol, "Relative event tolerance (catch-up)");

    std::string prefix, report_out, label;
    double an_horizon = 0;
    auto* analyze = app.add_subcommand("analyze", "Macroscopic metrics from a solve output prefix");
    analyze->add_option("trajectory", prefix, "Prefix used with solve --out")->required();
    analyze->add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
    analyze->add_option("--horizon", an_horizon, "Histogram range [0, T]");
    analyze->add_option("--out", report_out, "Report file (stdout by default)");
    analyze->add_option("--label", label, "Dataset tag");

    std::string which, gen_out;
    bool prestressed = false;
    double r0 = 0;
    auto* generate = app.add_subcommand("generate", "Write a built-in network");
    generate->add_option("which", which, "example1, grid or periodic")
        ->required()
        ->check(CLI::IsMember({"example1", "grid", "periodic"}));
    generate->add_option("--out", gen_out, "Output file (stdout by default)");
    generate->add_flag("--prestressed", prestressed, "example1: self-stressed initial state");
    generate->add_option("--r0", r0, "example1: drive factor");

    auto* safe = app.add_subcommand("check-safe-load", "Safe-load condition at every force breakpoint");
    safe->add_option("network", net, "Network file ('-' for stdin)")->required();
    safe->add_option("--rank-tol", cfg.rank_tol, "Relative rank tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*validate)
            return cmd_validate(net, cfg.rank_tol);
        if (*solve)
            return cmd_solve(nets, cfg);
        if (*analyze)
            return cmd_analyze(prefix, cfg.bins, an_horizon, report_out, label);
        if (*generate)
            return cmd_generate(which, gen_out, prestressed, r0);
        if (*safe)
            return cmd_safe_load(net, cfg.rank_tol);
    } catch (const lsm::SchemaError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalid;
    } catch (const lsm::AssumptionViolation& e) {
        std::cerr << "assumption " << e.assumption() << " violated: " << e.what() << '\n';
        return kInvalid;
    } catch (const lsm::InvalidInitialCondition& e) {
        std::cerr << "invalid initial condition: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
