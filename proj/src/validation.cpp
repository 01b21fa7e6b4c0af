#include "preb/validation.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"
#include "preb/negf.hpp"
#include "preb/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace preb::validation {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void at_most(CriterionResult& r, std::string name, double measured, double tolerance)
{
    r.checks.push_back({std::move(name), measured, tolerance, measured <= tolerance});
}

void at_least(CriterionResult& r, std::string name, double measured, double tolerance)
{
    r.checks.push_back({std::move(name), measured, tolerance, measured >= tolerance});
}

void inside(CriterionResult& r, std::string name, double measured, double lo, double hi)
{
    r.checks.push_back({std::move(name), measured, hi, measured >= lo && measured <= hi});
}

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    SweepSpec s;
    s.min = lo;
    s.max = hi;
    s.points = n;
    s.log_spacing = true;
    return s.values();
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepSpec::Axis axis, const std::vector<double>& values, int jobs)
{
    return run_sweep_values(base, axis, values, jobs);
}

int failed_rows(const std::vector<SweepRow>& rows)
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.report; }));
}

bool negative(double x, const NessReport& r)
{
    return x < -1e-12 * r.scale();
}

RunConfig with_tau(RunConfig c, double tau)
{
    c.process.tau = tau;
    return c;
}

// AC1: Lyapunov solution against plain iteration of the cycle map.
void lyapunov_oracle(const Options& opts, CriterionResult& r)
{
    auto t0 = clock_type::now();
    RunConfig cfg = heat_engine_preset(0.1);
    Setup s = build_setup(cfg);
    CMatrix g = s.propagator.system_block();
    CMatrix p = s.drive.value;

    CMatrix c_lyap;
    if (opts.tamper) {
        StepPropagator shifted = step_propagator(s.hamiltonian, cfg.process.tau * (1.0 + 1e-6));
        DriveMatrix d = drive_matrix(shifted, s.thermal[0], s.thermal[1]);
        c_lyap = solve_ness(shifted.system_block(), d.value);
    } else {
        c_lyap = solve_ness(g, p);
    }

    CMatrix c = CMatrix::Zero(g.rows(), g.cols());
    CMatrix gd = g.adjoint();
    for (long it = 0; it < 10000000; ++it) {
        CMatrix next = gd * c * g + p;
        double change = (next - c).cwiseAbs().maxCoeff();
        c = next;
        if (change < 1e-12)
            break;
    }
    at_most(r, "max|C_lyapunov-C_iterated|", (c_lyap - c).cwiseAbs().maxCoeff(), 1e-8);
    at_most(r, "runtime_s", seconds_since(t0), 5.0);
}

// AC2: first and second law, particle balance and Carnot bounds over a parameter grid.
void conservation_suite(const Options& opts, CriterionResult& r)
{
    auto t0 = clock_type::now();
    const int n_tau = opts.level == Level::full ? 25 : 5;
    std::vector<double> taus = log_grid(0.1, 20.0, n_tau);
    double first_law = 0.0;
    double sigma_min = INFINITY;
    double number = 0.0;
    int carnot = 0;
    int failures = 0;
    int points = 0;
    for (double width : {0.05, 0.2, 1.0}) {
        for (const RunConfig& base : {heat_engine_preset(width), refrigerator_preset(width)}) {
            std::vector<SweepRow> rows = sweep(base, SweepSpec::Axis::tau, taus, opts.jobs);
            failures += failed_rows(rows);
            for (const SweepRow& row : rows) {
                ++points;
                if (!row.report)
                    continue;
                const NessReport& q = *row.report;
                first_law = std::max(first_law, std::abs(q.P - q.Qdot[0] - q.Qdot[1]) / q.scale());
                sigma_min = std::min(sigma_min, q.sigma);
                number = std::max(number, std::abs(q.Ndot[0] + q.Ndot[1]));
                if (q.eta && *q.eta > q.eta_c)
                    ++carnot;
                if (q.cop && *q.cop > q.cop_c)
                    ++carnot;
            }
        }
    }
    at_most(r, "failed_points_of_" + std::to_string(points), failures, 0);
    at_most(r, "max|P-Q1-Q2|/scale", first_law, 1e-8);
    at_least(r, "min_sigma", sigma_min, -1e-10);
    at_most(r, "max|N1+N2|", number, 1e-10);
    at_most(r, "carnot_violations", carnot, 0);
    at_most(r, "runtime_s", seconds_since(t0), 180.0);
}

// AC3: narrow baths approach the collisional efficiency and COP.
void collisional_limit_check(const Options&, CriterionResult& r)
{
    const double width = 1e-3;
    NessReport engine = run_ness(heat_engine_preset(width));
    NessReport fridge = run_ness(refrigerator_preset(width));
    CollisionalPrediction pe = collisional_limit(2.0, -1.0, -2.0, 0.1, 1.0);
    CollisionalPrediction pf = collisional_limit(2.0, -1.0, -2.0, 0.7, 1.0);
    at_most(r, "heat_engine_regime_mismatch", engine.regime == Regime::heat_engine ? 0 : 1, 0);
    at_most(r, "|eta-eta0|/eta0", engine.eta ? rel(*engine.eta, pe.eta0) : INFINITY, 0.05);
    at_most(r, "refrigerator_regime_mismatch", fridge.regime == Regime::refrigerator ? 0 : 1, 0);
    at_most(r, "|cop-cop0|/cop0", fridge.cop ? rel(*fridge.cop, pf.cop0) : INFINITY, 0.05);
    double tight = 0.0;
    for (const NessReport* q : {&engine, &fridge}) {
        auto d = tight_coupling_check(*q, {2.0, -1.0}, -2.0);
        tight = std::max({tight, d[0] / std::abs(q->Qdot[0]), d[1] / std::abs(q->Qdot[1])});
    }
    at_most(r, "tight_coupling_relative_defect", tight, 0.02);
}

// AC4: sign structure of a chemical-potential scan against the collisional windows.
void regime_windows(const Options& opts, CriterionResult& r)
{
    const int n = opts.level == Level::full ? 61 : 21;
    const double b1 = 0.4;
    const double b2 = 1.0;
    // rho = (w02 - mu)/(w01 - mu) on cell centres of (-0.5, 1.5)
    std::vector<double> mus(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double rho = -0.5 + 2.0 * (2.0 * k + 1.0) / (2.0 * n);
        mus[static_cast<std::size_t>(k)] = (-1.0 - 2.0 * rho) / (1.0 - rho);
    }
    auto scan_config = [&](double width) {
        RunConfig c = heat_engine_preset(width);
        c.baths[0].thermal.beta = b1;
        c.baths[1].thermal.beta = b2;
        return c;
    };

    std::vector<SweepRow> rows = sweep(scan_config(0.05), SweepSpec::Axis::mu, mus, opts.jobs);
    int engine_bad = 0;
    int fridge_bad = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[k].report)
            continue;
        const NessReport& q = *rows[k].report;
        CollisionalPrediction p = collisional_limit(2.0, -1.0, mus[k], b1, b2);
        if (negative(q.P_ext, q) && !p.engine_window)
            ++engine_bad;
        if (negative(q.Qdot[1], q) && !p.fridge_window)
            ++fridge_bad;
    }
    at_most(r, "failed_points", failed_rows(rows), 0);
    at_most(r, "P_ext<0_outside_engine_window", engine_bad, 0);
    at_most(r, "Q2<0_outside_fridge_window", fridge_bad, 0);

    const double narrow = 1e-3;
    std::vector<SweepRow> narrow_rows = sweep(scan_config(narrow), SweepSpec::Axis::mu, mus, opts.jobs);
    double p_max = 0.0;
    double q_max = 0.0;
    for (const SweepRow& row : narrow_rows) {
        if (!row.report)
            continue;
        p_max = std::max(p_max, std::abs(row.report->P_ext));
        q_max = std::max(q_max, std::abs(row.report->Qdot[1]));
    }
    RunConfig boundary = with_axis(scan_config(narrow), SweepSpec::Axis::mu, (-1.0 - 2.0 * b1 / b2) / (1.0 - b1 / b2));
    NessReport at = run_ness(boundary);
    at_most(r, "failed_points_narrow", failed_rows(narrow_rows), 0);
    at_most(r, "|P_ext|_boundary/max", std::abs(at.P_ext) / p_max, 1e-3);
    at_most(r, "|Q2|_boundary/max", std::abs(at.Qdot[1]) / q_max, 1e-3);
}

// AC5: long refresh times approach the autonomous steady state.
void large_tau(const Options& opts, CriterionResult& r)
{
    const double width = 1.0;
    RunConfig base = heat_engine_preset(width);
    NessReport at20 = run_ness(with_tau(base, 20.0));
    NessReport at28 = run_ness(with_tau(base, 28.0));
    NegfReport negf = landauer_currents(base.system, {base.baths[0].spectral, base.baths[1].spectral},
                                        {base.baths[0].thermal, base.baths[1].thermal});
    at_most(r, "|Q1-Q1_negf|/|Q1_negf|", rel(at20.Qdot[0], negf.Qdot[0]), 0.05);
    at_most(r, "|Q2-Q2_negf|/|Q2_negf|", rel(at20.Qdot[1], negf.Qdot[1]), 0.05);

    std::vector<double> taus = log_grid(0.05, 20.0, opts.level == Level::full ? 40 : 12);
    std::vector<SweepRow> rows = sweep(base, SweepSpec::Axis::tau, taus, opts.jobs);
    double p_max = 0.0;
    for (const SweepRow& row : rows) {
        if (row.report)
            p_max = std::max(p_max, std::abs(row.report->P_ext));
    }
    at_most(r, "failed_points", failed_rows(rows), 0);
    at_most(r, "|P_ext(20)|/max_tau|P_ext|", std::abs(at20.P_ext) / p_max, 0.02);
    at_most(r, "|Q1(20)-Q1(28)|/|Q1(28)|", rel(at20.Qdot[0], at28.Qdot[0]), 0.01);
    at_most(r, "|Q2(20)-Q2(28)|/|Q2(28)|", rel(at20.Qdot[1], at28.Qdot[1]), 0.01);
}

// AC6: relaxation rate grows with tau at short refresh times.
void zeno(const Options& opts, CriterionResult& r)
{
    std::vector<double> taus = log_grid(0.01, 0.5, 10);
    for (double width : {0.05, 1.0}) {
        std::vector<SweepRow> rows = sweep(heat_engine_preset(width), SweepSpec::Axis::tau, taus, opts.jobs);
        int bad = failed_rows(rows);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].report && rows[i - 1].report && !(rows[i].report->rate > rows[i - 1].report->rate))
                ++bad;
        }
        at_most(r, "non_increasing_steps_lambda_" + csv::number(width), bad, 0);
    }
}

// AC7: the engine, its power and its entropy production all peak at finite tau.
void finite_tau_optimum(const Options& opts, CriterionResult& r)
{
    std::vector<double> taus = log_grid(0.05, 20.0, opts.level == Level::full ? 40 : 16);
    std::vector<SweepRow> rows = sweep(heat_engine_preset(0.05), SweepSpec::Axis::tau, taus, opts.jobs);
    at_most(r, "failed_points", failed_rows(rows), 0);
    double best_sigma = -INFINITY;
    double best_power = -INFINITY;
    double tau_sigma = NAN;
    double tau_power = NAN;
    double eta_max = 0.0;
    for (const SweepRow& row : rows) {
        if (!row.report)
            continue;
        const NessReport& q = *row.report;
        if (q.sigma > best_sigma) {
            best_sigma = q.sigma;
            tau_sigma = row.value;
        }
        if (-q.P_ext > best_power) {
            best_power = -q.P_ext;
            tau_power = row.value;
        }
        if (q.eta)
            eta_max = std::max(eta_max, *q.eta);
    }
    const SweepRow& last = rows.back();
    double eta_last = last.report && last.report->eta ? *last.report->eta : 0.0;
    inside(r, "argmax_sigma_tau", tau_sigma, 0.3, 3.0);
    inside(r, "argmax_power_tau", tau_power, 0.3, 3.0);
    r.checks.push_back({"max_eta_minus_eta_at_tau_20", eta_max - eta_last, 0.0, eta_max > eta_last});
}

// AC8: Carnot and Curzon-Ahlborn references.
void carnot(const Options&, CriterionResult& r)
{
    at_most(r, "|eta_c-0.9|", std::abs(carnot_references(0.1, 1.0).eta_c - 0.9), 1e-12);
    at_most(r, "|cop_c-7/3|", std::abs(carnot_references(0.7, 1.0).cop_c - 7.0 / 3.0), 1e-12);
    CarnotReferences c = carnot_references(0.4, 1.0);
    at_most(r, "|eta_ca/eta_c-0.6126|", std::abs(c.eta_ca / c.eta_c - 0.6126), 5e-4);
}

// AC9: chain mapping of a narrow Lorentzian, parity and method agreement.
void chain_map_golden(const Options&, CriterionResult& r)
{
    SpectralFunction narrow = SpectralFunction::lorentzian(2.0, 0.01, 2.0, 6.0);
    ChainMapOptions with_residual;
    for (bool tridiag : {false, true}) {
        ChainCoefficients c = tridiag ? chain_map_tridiag(narrow, 8192, 1, with_residual)
                                      : chain_map_recursion(narrow, 1, with_residual);
        std::string tag = tridiag ? "tridiag" : "recursion";
        at_most(r, tag + "_|g0-1|", std::abs(c.hop[0] - 1.0), 0.02);
        at_most(r, tag + "_|eps1-2|", std::abs(c.eps[0] - 2.0), 0.02);
        auto it = std::min_element(c.residual_omega.begin(), c.residual_omega.end(),
                                   [](double a, double b) { return std::abs(a - 2.0) < std::abs(b - 2.0); });
        double j1 = c.residual_J[static_cast<std::size_t>(it - c.residual_omega.begin())];
        at_most(r, tag + "_|J1(w0)-0.02|/0.02", rel(j1, 0.02), 0.10);
    }

    const std::size_t depth = 8;
    ChainMapOptions plain;
    plain.residual = false;
    double parity = 0.0;
    for (const SpectralFunction& even : {SpectralFunction::lorentzian(2.0, 0.5, 0.0, 6.0), SpectralFunction::flat(1.0, 6.0)}) {
        for (const ChainCoefficients& c : {chain_map_recursion(even, depth, plain), chain_map_tridiag(even, 8192, depth, plain)}) {
            double gmax = *std::max_element(c.hop.begin(), c.hop.end());
            for (double e : c.eps)
                parity = std::max(parity, std::abs(e) / gmax);
        }
    }
    at_most(r, "max|eps_p|/max(g_p)_even_J", parity, 1e-8);

    double cross = 0.0;
    for (double center : {2.0, -1.0}) {
        for (double width : {0.05, 0.2, 1.0}) {
            SpectralFunction sf = SpectralFunction::lorentzian(2.0, width, center, 6.0);
            ChainCoefficients a = chain_map_recursion(sf, depth, plain);
            ChainCoefficients b = chain_map_tridiag(sf, 8192, depth, plain);
            double gmax = *std::max_element(b.hop.begin(), b.hop.end());
            for (std::size_t p = 0; p < depth; ++p) {
                cross = std::max(cross, rel(a.hop[p], b.hop[p]));
                cross = std::max(cross, std::abs(a.eps[p] - b.eps[p]) / gmax);
            }
        }
    }
    at_most(r, "recursion_vs_tridiag_depth8", cross, 1e-3);
}

// AC10: step-resolved thermodynamics on a trajectory from the empty system.
void trajectory_thermo(const Options&, CriterionResult& r)
{
    NessResult ness = solve_ness_point(heat_engine_preset(0.05));
    const Setup& s = ness.setup;
    const auto specs = s.specs();
    const int steps = 200;
    CorrelationMatrix c = CorrelationMatrix::Zero(s.hamiltonian.system.size, s.hamiltonian.system.size);
    std::vector<StepThermo> thermo;
    double first_law = 0.0;
    double sigma_min = INFINITY;
    double energy = 0.0;
    double particles = 0.0;
    for (int m = 0; m < steps; ++m) {
        StepThermo t = step_thermodynamics(c, s.hamiltonian, s.propagator, s.thermal, specs);
        double scale = std::max({std::abs(t.delta_U), std::abs(t.W_ext), std::abs(t.W_chem), std::abs(t.Q[0]),
                                 std::abs(t.Q[1]), 1e-300});
        first_law = std::max(first_law, std::abs(t.delta_U - (t.W_ext + t.W_chem) + t.Q[0] + t.Q[1]) / scale);
        sigma_min = std::min(sigma_min, t.Sigma);
        energy = std::max(energy, std::abs(t.delta_U + t.dH_B[0] + t.dH_B[1] + t.dH_SB[0] + t.dH_SB[1]));
        particles = std::max(particles, std::abs(t.dN_S + t.dN_B[0] + t.dN_B[1]));
        c = t.C_S_end;
        thermo.push_back(std::move(t));
    }
    at_most(r, "per_step_first_law_relative", first_law, 1e-9);
    at_least(r, "min_step_Sigma", sigma_min, -1e-10);
    at_most(r, "energy_closure", energy, 1e-10);
    at_most(r, "particle_closure", particles, 1e-10);

    ThermoTotals tail = cumulative_thermo(std::span<const StepThermo>(thermo).subspan(steps / 2), s.config.process.tau);
    const NessReport& q = ness.report;
    double worst = std::max({rel(tail.P_ext_rate, q.P_ext), rel(tail.Q_rate[0], q.Qdot[0]),
                             rel(tail.Q_rate[1], q.Qdot[1]), rel(tail.N_rate[0], q.Ndot[0])});
    at_most(r, "cumulative_rates_vs_ness", worst, 1e-6);
}

// Chain-length convergence: doubling L_B leaves the rates unchanged.
void chain_length_doubling(const Options&, CriterionResult& r)
{
    RunConfig cfg = heat_engine_preset(0.05);
    NessResult a = solve_ness_point(cfg);
    RunConfig doubled = cfg;
    doubled.process.l0 = a.setup.hamiltonian.chain_length + cfg.process.l0;
    NessReport b = run_ness(doubled);
    const NessReport& q = a.report;
    double worst = std::max({rel(q.P_ext, b.P_ext), rel(q.Qdot[0], b.Qdot[0]), rel(q.Qdot[1], b.Qdot[1])});
    at_most(r, "rates_L_B_vs_2L_B", worst, 1e-6);
}

} // namespace

bool CriterionResult::pass() const
{
    if (!error.empty() || checks.empty())
        return false;
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* CriterionResult::headline() const
{
    if (checks.empty())
        return nullptr;
    for (const Check& c : checks) {
        if (!c.pass)
            return &c;
    }
    const Check* best = &checks.front();
    double ratio = -INFINITY;
    for (const Check& c : checks) {
        if (c.tolerance > 0.0 && c.measured / c.tolerance > ratio) {
            ratio = c.measured / c.tolerance;
            best = &c;
        }
    }
    return best;
}

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> list{
        {"AC1", "lyapunov-oracle", lyapunov_oracle},
        {"AC2", "conservation-suite", conservation_suite},
        {"AC3", "collisional-limit", collisional_limit_check},
        {"AC4", "regime-windows", regime_windows},
        {"AC5", "large-tau-convergence", large_tau},
        {"AC6", "zeno-rate", zeno},
        {"AC7", "finite-tau-optimum", finite_tau_optimum},
        {"AC8", "carnot-references", carnot},
        {"AC9", "chain-map-golden", chain_map_golden},
        {"AC10", "trajectory-thermodynamics", trajectory_thermo},
        {"LB", "chain-length-doubling", chain_length_doubling},
    };
    return list;
}

CriterionResult run_criterion(const Criterion& c, const Options& opts)
{
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    auto t0 = clock_type::now();
    try {
        c.body(opts, r);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
}

std::vector<CriterionResult> run_all(const Options& opts, const std::vector<std::string>& only)
{
    std::vector<CriterionResult> out;
    for (const Criterion& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        out.push_back(run_criterion(c, opts));
    }
    return out;
}

void print_header(std::ostream& os)
{
    os << "id,measured,tolerance,pass,title\n";
}

void print_result(std::ostream& os, const CriterionResult& r, bool details)
{
    const Check* h = r.headline();
    os << r.id << ',' << (h ? csv::number(h->measured) : std::string("nan")) << ','
       << (h ? csv::number(h->tolerance) : std::string("nan")) << ',' << (r.pass() ? "PASS" : "FAIL") << ','
       << r.title << '\n';
    if (!details)
        return;
    for (const Check& c : r.checks) {
        os << "#   " << r.id << ' ' << c.name << " measured=" << csv::number(c.measured)
           << " tolerance=" << csv::number(c.tolerance) << ' ' << (c.pass ? "ok" : "FAILED") << '\n';
    }
    if (!r.error.empty())
        os << "#   " << r.id << " error: " << r.error << '\n';
    os << "#   " << r.id << " seconds=" << csv::number(r.seconds) << '\n';
}

} // namespace preb::validation
