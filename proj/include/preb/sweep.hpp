#pragma once

#include "preb/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace preb {

struct SweepRow {
    double value = 0.0;
    RunConfig config;
    std::optional<NessReport> report;
    std::string error;
};

// One independent NESS solve per grid point, rows in grid order.
std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& spec, int jobs = 0);
std::vector<SweepRow> run_sweep_serial(const RunConfig& base, const SweepSpec& spec);

std::vector<SweepRow> run_sweep_values(const RunConfig& base, SweepSpec::Axis axis,
                                       const std::vector<double>& values, int jobs = 0);

SweepRow run_sweep_point(const RunConfig& base, SweepSpec::Axis axis, double value);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace preb
