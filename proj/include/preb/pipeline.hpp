#pragma once

#include "preb/config.hpp"
#include "preb/dynamics.hpp"
#include "preb/ness_thermo.hpp"

#include <iosfwd>

namespace preb {

std::array<ChainCoefficients, 2> map_chains(const RunConfig& cfg, std::size_t depth, bool residual = false);

// Everything needed to iterate one cycle of the process at cfg.process.tau.
struct Setup {
    RunConfig config;
    std::array<ChainCoefficients, 2> chains;
    SetupHamiltonian hamiltonian;
    std::array<CorrelationMatrix, 2> thermal;
    StepPropagator propagator;
    DriveMatrix drive;

    std::array<BathThermalSpec, 2> specs() const { return {config.baths[0].thermal, config.baths[1].thermal}; }
};

Setup build_setup(const RunConfig& cfg);

struct NessResult {
    Setup setup;
    CorrelationMatrix state;
    NessReport report;
};

NessResult solve_ness_point(const RunConfig& cfg);
NessReport run_ness(const RunConfig& cfg);

void write_report_header(std::ostream& os, bool with_error);
void write_report_row(std::ostream& os, const RunConfig& cfg, const NessReport& report);

} // namespace preb
