#include "preb/negf.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>

namespace preb {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double linear_lookup(const std::vector<double>& x, const std::vector<double>& y, double at)
{
    if (at <= x.front() || at >= x.back())
        return 0.0;
    double h = x[1] - x[0];
    double s = (at - x.front()) / h;
    std::size_t i = std::min(static_cast<std::size_t>(s), x.size() - 2);
    double t = s - static_cast<double>(i);
    return (1.0 - t) * y[i] + t * y[i + 1];
}

} // namespace

LeadSelfEnergy::LeadSelfEnergy(const SpectralFunction& sf)
    : sf_(sf.kind() == SpectralFunction::Kind::tabulated && !sf.interpolates()
              ? SpectralFunction::tabulated(sf.table_omega(), sf.table_values(), true)
              : sf)
{
    if (sf_.kind() == SpectralFunction::Kind::tabulated) {
        grid_ = frequency_grid(sf_);
        std::vector<double> values(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i)
            values[i] = sf_(grid_[i]);
        values.front() = values.back() = 0.0;
        hilbert_ = hilbert_transform(grid_, values);
    }
}

std::complex<double> LeadSelfEnergy::operator()(double omega) const
{
    double jh = sf_.kind() == SpectralFunction::Kind::tabulated ? linear_lookup(grid_, hilbert_, omega)
                                                                : hilbert_exact(sf_, omega);
    return {0.5 * jh, -0.5 * sf_(omega)};
}

std::complex<double> lead_self_energy(const SpectralFunction& sf, double omega)
{
    return LeadSelfEnergy(sf)(omega);
}

LandauerModel::LandauerModel(const SystemSpec& system, const std::array<SpectralFunction, 2>& leads)
    : system_(system), leads_{LeadSelfEnergy(leads[0]), LeadSelfEnergy(leads[1])}
{
    system_.validate();
}

CMatrix LandauerModel::retarded(double omega, bool* singular) const
{
    const int n = system_.sites();
    auto build = [&](std::complex<double> z) {
        CMatrix m = z * CMatrix::Identity(n, n) - system_.hamiltonian.cast<cplx>();
        for (int l = 0; l < 2; ++l) {
            int s = system_.coupling_sites[static_cast<std::size_t>(l)];
            m(s, s) -= leads_[static_cast<std::size_t>(l)](omega);
        }
        return m;
    };
    CMatrix m = build(omega);
    Eigen::FullPivLU<CMatrix> lu(m);
    bool bad = !m.allFinite() || lu.rcond() < 1e-14;
    if (bad) {
        m = build(std::complex<double>(omega, 1e-12));
        lu.compute(m);
    }
    if (singular)
        *singular = bad;
    if (!m.allFinite())
        return CMatrix::Zero(n, n);
    return lu.inverse();
}

double LandauerModel::transmission(double omega) const
{
    CMatrix g = retarded(omega);
    int s1 = system_.coupling_sites[0];
    int s2 = system_.coupling_sites[1];
    return leads_[0].width(omega) * leads_[1].width(omega) * std::norm(g(s1, s2));
}

std::pair<double, double> LandauerModel::window(double margin) const
{
    auto [a1, b1] = leads_[0].spectral().support();
    auto [a2, b2] = leads_[1].spectral().support();
    double lo = std::min(a1, a2);
    double hi = std::max(b1, b2);
    double pad = margin * 0.5 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> LandauerModel::breakpoints(double margin) const
{
    auto [lo, hi] = window(margin);
    std::vector<double> pts{lo, hi};
    for (const auto& lead : leads_) {
        const SpectralFunction& sf = lead.spectral();
        auto [a, b] = sf.support();
        pts.push_back(a);
        pts.push_back(b);
        if (sf.kind() == SpectralFunction::Kind::lorentzian)
            pts.push_back(sf.center());
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(system_.hamiltonian, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        pts.push_back(es.eigenvalues()(k));
    std::erase_if(pts, [&](double x) { return x < lo || x > hi; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              pts.end());
    return pts;
}

namespace {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double l1;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// Globally adaptive Gauss-Kronrod: bisect the worst segment until the summed error
// meets the tolerance or the subdivision budget is spent. Segments whose error is at
// the rounding level are retired instead of split.
template <class F>
std::pair<double, double> adaptive_integral(F& f, const std::vector<double>& pts, const NegfOptions& opts)
{
    using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr double rounding = 100.0 * std::numeric_limits<double>::epsilon();
    auto segment = [&](double a, double b) {
        Segment s{a, b, 0.0, 0.0, 0.0};
        s.value = rule::integrate(f, a, b, 0, 0.0, &s.error, &s.l1);
        // the single-rule error estimate is reported on [-1, 1]
        s.error *= 0.5 * (b - a);
        return s;
    };
    std::priority_queue<Segment> queue;
    std::vector<Segment> done;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Segment s = segment(pts[k], pts[k + 1]);
        value += s.value;
        error += s.error;
        queue.push(s);
    }
    for (unsigned n = 0; n < opts.max_subdivisions && !queue.empty(); ++n) {
        if (error <= opts.relative_tolerance * std::abs(value))
            break;
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.error <= rounding * worst.l1 || !(worst.a < mid && mid < worst.b)) {
            done.push_back(worst);
            continue;
        }
        Segment left = segment(worst.a, mid);
        Segment right = segment(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // final sum in grid order
    while (!queue.empty()) {
        done.push_back(queue.top());
        queue.pop();
    }
    std::sort(done.begin(), done.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    value = 0.0;
    error = 0.0;
    for (const Segment& s : done) {
        value += s.value;
        error += s.error;
    }
    return {value, error};
}

} // namespace

NegfReport landauer_currents(const SystemSpec& system, const std::array<SpectralFunction, 2>& leads,
                             const std::array<BathThermalSpec, 2>& specs, const NegfOptions& opts)
{
    for (const auto& s : specs) {
        if (!(s.beta > 0.0) || !std::isfinite(s.mu))
            throw ConfigError("landauer_currents: beta must be positive and mu finite");
    }
    LandauerModel model(system, leads);
    const int n = system.sites();
    const int s1 = system.coupling_sites[0];
    const int s2 = system.coupling_sites[1];
    const int quantities = 2 + n;

    // quantity 0: T (f1 - f2), 1: omega T (f1 - f2), 2+i: occupation density of site i
    auto integrand = [&](double omega, int q, int* singular) {
        bool sing = false;
        CMatrix g = model.retarded(omega, &sing);
        if (sing && singular)
            ++*singular;
        double w1 = model.lead(0).width(omega);
        double w2 = model.lead(1).width(omega);
        double f1 = fermi_occupation(specs[0], omega);
        double f2 = fermi_occupation(specs[1], omega);
        if (q < 2) {
            double t = w1 * w2 * std::norm(g(s1, s2)) * (f1 - f2);
            return q == 0 ? t : omega * t;
        }
        int i = q - 2;
        return w1 * std::norm(g(i, s1)) * f1 + w2 * std::norm(g(i, s2)) * f2;
    };

    const std::vector<double> pts = model.breakpoints(opts.window_margin);
    std::vector<double> total(static_cast<std::size_t>(quantities), 0.0);
    std::vector<double> errors(total.size(), 0.0);
    std::vector<int> singular(total.size(), 0);

#pragma omp parallel for schedule(dynamic)
    for (int q = 0; q < quantities; ++q) {
        const auto uq = static_cast<std::size_t>(q);
        auto f = [&](double w) { return integrand(w, q, &singular[uq]); };
        auto [v, e] = adaptive_integral(f, pts, opts);
        total[uq] = v;
        errors[uq] = e;
    }

    NegfReport r;
    for (std::size_t q = 0; q < total.size(); ++q) {
        r.error_estimate = std::max(r.error_estimate, errors[q] / two_pi);
        r.singular_points += singular[q];
    }
    r.I = total[0] / two_pi;
    r.J = total[1] / two_pi;
    r.Qdot[0] = -(r.J - specs[0].mu * r.I);
    r.Qdot[1] = r.J - specs[1].mu * r.I;
    r.P_chem = (specs[0].mu - specs[1].mu) * r.I;
    r.sigma = specs[0].beta * r.Qdot[0] + specs[1].beta * r.Qdot[1];
    for (int i = 0; i < n; ++i)
        r.occupations.push_back(total[static_cast<std::size_t>(2 + i)] / two_pi);
    return r;
}

void write_transmission_csv(std::ostream& os, const LandauerModel& model, std::size_t points)
{
    if (points < 2)
        throw ConfigError("transmission dump needs at least 2 points");
    auto [lo, hi] = model.window(0.05);
    os << "omega,T\n";
    for (std::size_t i = 0; i < points; ++i) {
        double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        os << csv::number(w) << ',' << csv::number(model.transmission(w)) << '\n';
    }
}

} // namespace preb
