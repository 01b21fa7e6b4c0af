#include "preb/spectral_bath.hpp"
#include "preb/sweep.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

namespace {

double seconds(const std::function<void()>& f, int repeats)
{
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i)
        f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

} // namespace

int main(int argc, char** argv)
{
    int points = argc > 1 ? std::atoi(argv[1]) : 8192;
    int sweep_points = argc > 2 ? std::atoi(argv[2]) : 16;
    std::printf("threads: %d\n", omp_get_max_threads());

    preb::SpectralFunction sf = preb::SpectralFunction::lorentzian(2.0, 0.05, 2.0, 6.0);
    std::vector<double> grid = preb::frequency_grid(sf, static_cast<std::size_t>(points));
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = sf(grid[i]);
    values.front() = values.back() = 0.0;

    std::vector<double> a;
    std::vector<double> b;
    double ts = seconds([&] { a = preb::hilbert_transform_serial(grid, values); }, 3);
    double tp = seconds([&] { b = preb::hilbert_transform(grid, values); }, 3);
    bool same = a == b;
    std::printf("hilbert_transform  n=%d  serial %.4f s  parallel %.4f s  speedup %.2f  identical %s\n", points, ts,
                tp, ts / tp, same ? "yes" : "no");

    preb::RunConfig cfg = preb::heat_engine_preset(0.05);
    preb::SweepSpec spec;
    spec.axis = preb::SweepSpec::Axis::tau;
    spec.min = 0.1;
    spec.max = 10.0;
    spec.points = sweep_points;
    spec.log_spacing = true;
    std::vector<preb::SweepRow> rs;
    std::vector<preb::SweepRow> rp;
    double ss = seconds([&] { rs = preb::run_sweep_serial(cfg, spec); }, 1);
    double sp = seconds([&] { rp = preb::run_sweep(cfg, spec); }, 1);
    bool equal = rs.size() == rp.size();
    for (std::size_t i = 0; equal && i < rs.size(); ++i)
        equal = rs[i].report && rp[i].report && rs[i].report->P_ext == rp[i].report->P_ext
                && rs[i].report->sigma == rp[i].report->sigma;
    std::printf("tau sweep          n=%d  serial %.4f s  parallel %.4f s  speedup %.2f  identical %s\n", sweep_points,
                ss, sp, ss / sp, equal ? "yes" : "no");
    return same && equal ? 0 : 1;
}
