#include "preb/pipeline.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace preb {

namespace {

constexpr std::size_t probe_depth = 40;
constexpr std::size_t recursion_depth = 10;

std::size_t modes_for(const RunConfig& cfg, std::size_t depth)
{
    if (cfg.process.n_modes > 0)
        return static_cast<std::size_t>(cfg.process.n_modes);
    return std::max<std::size_t>(8192, 50 * depth);
}

std::optional<double> narrowest_width(const RunConfig& cfg)
{
    std::optional<double> w;
    for (const auto& b : cfg.baths) {
        if (b.spectral.kind() == SpectralFunction::Kind::lorentzian)
            w = w ? std::min(*w, b.spectral.width()) : b.spectral.width();
    }
    return w;
}

double asymptotic_hop(const std::array<ChainCoefficients, 2>& chains)
{
    return std::max(chains[0].hop_asym, chains[1].hop_asym);
}

} // namespace

std::array<ChainCoefficients, 2> map_chains(const RunConfig& cfg, std::size_t depth, bool residual)
{
    ChainMapOptions opts;
    opts.grid_points = static_cast<std::size_t>(cfg.process.grid_points);
    opts.tail_tolerance = cfg.process.tail_tolerance;
    opts.residual = residual;
    std::array<ChainCoefficients, 2> chains;
    for (std::size_t l = 0; l < 2; ++l) {
        const SpectralFunction& sf = cfg.baths[l].spectral;
        chains[l] = cfg.process.method == ChainMethod::tridiag
                        ? chain_map_tridiag(sf, modes_for(cfg, depth), depth, opts)
                        : chain_map_recursion(sf, depth, opts);
    }
    return chains;
}

Setup build_setup(const RunConfig& cfg)
{
    cfg.validate();
    Setup s;
    s.config = cfg;
    const ProcessConfig& p = cfg.process;

    std::size_t depth = p.depth > 0 ? static_cast<std::size_t>(p.depth)
                                    : (p.method == ChainMethod::tridiag ? probe_depth : recursion_depth);
    s.chains = map_chains(cfg, depth);
    int chain_length = chain_length_for_tau(asymptotic_hop(s.chains), p.tau, p.l0);
    if (p.depth == 0 && p.method == ChainMethod::tridiag && static_cast<std::size_t>(chain_length) > depth)
        s.chains = map_chains(cfg, static_cast<std::size_t>(chain_length));

    s.hamiltonian = assemble_hamiltonian(cfg.system, s.chains, chain_length);
    for (std::size_t l = 0; l < 2; ++l)
        s.thermal[l] = thermal_correlation(s.hamiltonian.bath_block(static_cast<int>(l)), cfg.baths[l].thermal);
    s.propagator = step_propagator(s.hamiltonian, p.tau);
    s.drive = drive_matrix(s.propagator, s.thermal[0], s.thermal[1]);
    return s;
}

NessResult solve_ness_point(const RunConfig& cfg)
{
    const double b1 = cfg.baths[0].thermal.beta;
    const double b2 = cfg.baths[1].thermal.beta;
    if (b1 > b2)
        throw ConfigError("bath 1 must be hot (beta1 <= beta2)");

    NessResult r;
    r.setup = build_setup(cfg);
    const Setup& s = r.setup;
    r.state = solve_ness(s.propagator.system_block(), s.drive.value);
    r.report = ness_rates(r.state, s.hamiltonian, s.propagator, s.thermal, s.specs(), cfg.process.tau);
    if (b1 < b2) {
        classify_regime(r.report);
    } else {
        r.report.regime = Regime::dud;
        r.report.eta_c = 0.0;
        r.report.cop_c = std::numeric_limits<double>::infinity();
        r.report.eta_ca = 0.0;
    }
    if (auto w = narrowest_width(cfg)) {
        r.report.tau_r = rethermalization_estimate(*w, cfg.process.tau_r_factor);
        r.report.copies = copies_required(*r.report.tau_r, cfg.process.tau);
    }
    return r;
}

NessReport run_ness(const RunConfig& cfg)
{
    return solve_ness_point(cfg).report;
}

void write_report_header(std::ostream& os, bool with_error)
{
    os << "tau,lambda,mu,beta1,beta2,P_ext,P_chem,Q1,Q2,N1,sigma,regime,eta,eta_c,cop,cop_c,r,radius,Ncopies";
    if (with_error)
        os << ",error";
    os << '\n';
}

void write_report_row(std::ostream& os, const RunConfig& cfg, const NessReport& r)
{
    const SpectralFunction& sf = cfg.baths[0].spectral;
    std::optional<double> width;
    if (sf.kind() == SpectralFunction::Kind::lorentzian)
        width = sf.width();
    os << csv::number(cfg.process.tau) << ',' << csv::number(width) << ',' << csv::number(cfg.baths[0].thermal.mu)
       << ',' << csv::number(cfg.baths[0].thermal.beta) << ',' << csv::number(cfg.baths[1].thermal.beta) << ','
       << csv::number(r.P_ext) << ',' << csv::number(r.P_chem) << ',' << csv::number(r.Qdot[0]) << ','
       << csv::number(r.Qdot[1]) << ',' << csv::number(r.Ndot[0]) << ',' << csv::number(r.sigma) << ','
       << to_string(r.regime) << ',' << csv::number(r.eta) << ',' << csv::number(r.eta_c) << ','
       << csv::number(r.cop) << ',' << csv::number(r.cop_c) << ',' << csv::number(r.rate) << ','
       << csv::number(r.radius) << ',';
    if (r.copies)
        os << *r.copies;
}

} // namespace preb
