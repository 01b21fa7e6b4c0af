#include "preb/cli.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"
#include "preb/negf.hpp"
#include "preb/sweep.hpp"
#include "preb/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

namespace preb::cli {

namespace {

struct Common {
    std::string config;
    std::string out;
    int jobs = 0;
    std::optional<int> l0;
    std::optional<int> depth;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config)
{
    if (needs_config)
        cmd->add_option("config", c.config, "configuration file")->required();
    cmd->add_option("--out", c.out, "output path (default: standard output)");
    cmd->add_option("--jobs", c.jobs, "worker threads for sweeps (default: all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--l0", c.l0, "chain length offset L0");
    cmd->add_option("--depth", c.depth, "chain mapping depth (default: from tau)");
}

RunConfig load(const Common& c)
{
    RunConfig cfg = load_config(c.config);
    if (c.l0)
        cfg.process.l0 = *c.l0;
    if (c.depth)
        cfg.process.depth = *c.depth;
    cfg.validate();
    return cfg;
}

// Writes to --out when given, otherwise to the fallback stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw ConfigError("cannot write output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void cmd_ness(const Common& c, std::ostream& out)
{
    RunConfig cfg = load(c);
    NessReport r = run_ness(cfg);
    Output o(c.out, out);
    write_report_header(o.stream(), false);
    write_report_row(o.stream(), cfg, r);
    o.stream() << '\n';
}

void cmd_sweep(const Common& c, std::ostream& out)
{
    RunConfig cfg = load(c);
    if (!cfg.sweep)
        throw ConfigError("sweep: config has no [sweep] section");
    Output o(c.out, out);
    write_sweep_csv(o.stream(), run_sweep(cfg, *cfg.sweep, c.jobs));
}

void cmd_trajectory(const Common& c, int steps, std::ostream& out)
{
    if (steps < 1)
        throw ConfigError("trajectory: --steps must be at least 1");
    RunConfig cfg = load(c);
    Setup s = build_setup(cfg);
    std::optional<CorrelationMatrix> ness;
    try {
        ness = solve_ness(s.propagator.system_block(), s.drive.value);
    } catch (const NoUniqueNessError&) {
    }
    Output o(c.out, out);
    std::ostream& os = o.stream();
    os << "step,deltaU,W_ext,W_chem,Q1,Q2,dS,Sigma,dist_to_ness\n";
    const int ls = s.hamiltonian.system.size;
    CorrelationMatrix state = CorrelationMatrix::Zero(ls, ls);
    for (int m = 1; m <= steps; ++m) {
        StepThermo t = step_thermodynamics(state, s.hamiltonian, s.propagator, s.thermal, s.specs());
        state = t.C_S_end;
        double dist = ness ? max_abs(CMatrix(state - *ness)) : std::numeric_limits<double>::quiet_NaN();
        os << m << ',' << csv::number(t.delta_U) << ',' << csv::number(t.W_ext) << ',' << csv::number(t.W_chem)
           << ',' << csv::number(t.Q[0]) << ',' << csv::number(t.Q[1]) << ',' << csv::number(t.dS) << ','
           << csv::number(t.Sigma) << ',' << csv::number(dist) << '\n';
    }
}

void cmd_chainmap(const Common& c, int bath, const std::string& residual_path, std::ostream& out)
{
    RunConfig cfg = load(c);
    const auto l = static_cast<std::size_t>(bath - 1);
    const bool residual = !residual_path.empty();
    // without an explicit depth, use the depth the NESS pipeline would choose
    std::size_t depth = cfg.process.depth > 0 ? static_cast<std::size_t>(cfg.process.depth)
                                              : build_setup(cfg).chains[l].depth();
    ChainCoefficients chain = map_chains(cfg, depth, residual)[l];
    if (residual) {
        std::ofstream res(residual_path);
        if (!res)
            throw ConfigError("cannot write output file " + residual_path);
        write_spectral_csv(res, chain.residual_omega, chain.residual_J);
    }
    Output o(c.out, out);
    write_chain_csv(o.stream(), chain);
}

void cmd_negf(const Common& c, const std::string& transmission_path, int points, std::ostream& out)
{
    RunConfig cfg = load(c);
    std::array<SpectralFunction, 2> leads{cfg.baths[0].spectral, cfg.baths[1].spectral};
    NegfReport r = landauer_currents(cfg.system, leads, {cfg.baths[0].thermal, cfg.baths[1].thermal});
    Output o(c.out, out);
    std::ostream& os = o.stream();
    os << "I,J,Q1,Q2,P_chem,sigma";
    for (std::size_t i = 0; i < r.occupations.size(); ++i)
        os << ",n" << i + 1;
    os << '\n'
       << csv::number(r.I) << ',' << csv::number(r.J) << ',' << csv::number(r.Qdot[0]) << ','
       << csv::number(r.Qdot[1]) << ',' << csv::number(r.P_chem) << ',' << csv::number(r.sigma);
    for (double n : r.occupations)
        os << ',' << csv::number(n);
    os << '\n';
    if (!transmission_path.empty()) {
        std::ofstream t(transmission_path);
        if (!t)
            throw ConfigError("cannot write output file " + transmission_path);
        write_transmission_csv(t, LandauerModel(cfg.system, leads), static_cast<std::size_t>(points));
    }
}

int cmd_validate(const Common& c, bool full, bool tamper, const std::vector<std::string>& only, std::ostream& out)
{
    validation::Options opts;
    opts.level = full ? validation::Level::full : validation::Level::quick;
    opts.tamper = tamper;
    opts.jobs = c.jobs;
    Output o(c.out, out);
    std::ostream& os = o.stream();
    validation::print_header(os);
    bool ok = true;
    for (const auto& crit : validation::criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end())
            continue;
        validation::CriterionResult r = validation::run_criterion(crit, opts);
        validation::print_result(os, r);
        os.flush();
        ok = ok && r.pass();
    }
    return ok ? 0 : static_cast<int>(ExitCode::validation);
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Periodically refreshed bath simulator for quadratic fermion systems", "preb"};
    app.require_subcommand(1);

    Common common;
    int steps = 100;
    int bath = 1;
    std::string residual_path;
    std::string transmission_path;
    int points = 2001;
    bool full = false;
    bool tamper = false;
    std::vector<std::string> only;

    auto* ness = app.add_subcommand("ness", "steady-state report for one parameter point");
    add_common(ness, common, true);
    auto* sweep = app.add_subcommand("sweep", "steady-state reports over the [sweep] grid");
    add_common(sweep, common, true);
    auto* traj = app.add_subcommand("trajectory", "step thermodynamics starting from the empty system");
    add_common(traj, common, true);
    traj->add_option("--steps", steps, "number of cycles")->required();
    auto* chain = app.add_subcommand("chainmap", "chain coefficients of one bath");
    add_common(chain, common, true);
    chain->add_option("--bath", bath, "bath index")->check(CLI::Range(1, 2));
    chain->add_option("--residual", residual_path, "also write the residual spectral function");
    auto* negf = app.add_subcommand("negf", "continuous-time Landauer reference");
    add_common(negf, common, true);
    negf->add_option("--transmission", transmission_path, "write T(omega) to this path");
    negf->add_option("--points", points, "points in the transmission dump")->check(CLI::Range(2, 10000000));
    auto* validate = app.add_subcommand("validate", "run the acceptance checks");
    add_common(validate, common, false);
    validate->add_flag("--full", full, "full grids instead of the quick ones");
    validate->add_flag("--tamper", tamper, "perturb the Lyapunov path (the suite must fail)");
    validate->add_option("--only", only, "restrict to these criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : static_cast<int>(ExitCode::config);
    }

    try {
        if (*ness)
            cmd_ness(common, out);
        else if (*sweep)
            cmd_sweep(common, out);
        else if (*traj)
            cmd_trajectory(common, steps, out);
        else if (*chain)
            cmd_chainmap(common, bath, residual_path, out);
        else if (*negf)
            cmd_negf(common, transmission_path, points, out);
        else if (*validate)
            return cmd_validate(common, full, tamper, only, out);
    } catch (const Error& e) {
        err << "preb: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        err << "preb: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical);
    }
    return 0;
}

} // namespace preb::cli
