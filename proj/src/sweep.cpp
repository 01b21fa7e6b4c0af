#include "preb/sweep.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <ostream>

namespace preb {

SweepRow run_sweep_point(const RunConfig& base, SweepSpec::Axis axis, double value)
{
    SweepRow row;
    row.value = value;
    row.config = base;
    try {
        row.config = with_axis(base, axis, value);
        row.report = run_ness(row.config);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep_serial(const RunConfig& base, const SweepSpec& spec)
{
    std::vector<double> grid = spec.values();
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double v : grid)
        rows.push_back(run_sweep_point(base, spec.axis, v));
    return rows;
}

std::vector<SweepRow> run_sweep_values(const RunConfig& base, SweepSpec::Axis axis,
                                       const std::vector<double>& values, int jobs)
{
    std::vector<SweepRow> rows(values.size());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        rows[static_cast<std::size_t>(i)] = run_sweep_point(base, axis, values[static_cast<std::size_t>(i)]);
    return rows;
}

std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& spec, int jobs)
{
    return run_sweep_values(base, spec.axis, spec.values(), jobs);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    write_report_header(os, true);
    for (const SweepRow& row : rows) {
        if (row.report) {
            write_report_row(os, row.config, *row.report);
            os << ",\n";
            continue;
        }
        std::string msg = row.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        const RunConfig& c = row.config;
        std::optional<double> width;
        if (c.baths[0].spectral.kind() == SpectralFunction::Kind::lorentzian)
            width = c.baths[0].spectral.width();
        os << csv::number(c.process.tau) << ',' << csv::number(width) << ',' << csv::number(c.baths[0].thermal.mu)
           << ',' << csv::number(c.baths[0].thermal.beta) << ',' << csv::number(c.baths[1].thermal.beta)
           << std::string(15, ',') << msg << '\n';
    }
}

} // namespace preb
