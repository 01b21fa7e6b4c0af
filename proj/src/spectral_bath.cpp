#include "preb/spectral_bath.hpp"

#include "preb/csv.hpp"
#include "preb/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <ostream>
#include <tuple>

namespace preb {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw ConfigError(std::string("spectral function: ") + what + " must be finite");
}

double uniform_step(std::span<const double> omega, const char* who)
{
    if (omega.size() < 3)
        throw ConfigError(std::string(who) + ": grid needs at least 3 points");
    double h = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
    if (!(h > 0.0))
        throw ConfigError(std::string(who) + ": grid must be increasing");
    for (std::size_t i = 1; i < omega.size(); ++i) {
        if (std::abs(omega[i] - omega[i - 1] - h) > 1e-9 * h)
            throw ConfigError(std::string(who) + ": grid is not uniform");
    }
    return h;
}

// pi * H_k for the hat-function kernel, k >= 1.
double hat_kernel(std::size_t k)
{
    if (k == 1)
        return 2.0 * std::numbers::ln2;
    double kk = static_cast<double>(k);
    return (kk - 1.0) * std::log1p(-1.0 / kk) + (kk + 1.0) * std::log1p(1.0 / kk);
}

std::vector<double> kernel_table(std::size_t n)
{
    std::vector<double> kernel(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        kernel[k] = hat_kernel(k) / std::numbers::pi;
    return kernel;
}

void check_hilbert_input(std::span<const double> omega, std::span<const double> values)
{
    if (omega.size() != values.size())
        throw ConfigError("hilbert_transform: grid and values differ in length");
    uniform_step(omega, "hilbert_transform");
    double scale = 0.0;
    for (double v : values)
        scale = std::max(scale, std::abs(v));
    if (std::abs(values.front()) > 1e-14 * scale || std::abs(values.back()) > 1e-14 * scale)
        throw ConfigError("hilbert_transform: values must vanish at the grid ends");
}

double kernel_row(std::span<const double> values, const std::vector<double>& kernel, std::size_t i)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j < i)
            acc += values[j] * kernel[i - j];
        else if (j > i)
            acc -= values[j] * kernel[j - i];
    }
    return acc;
}

SpectralFunction interpolating(const SpectralFunction& sf)
{
    if (sf.kind() == SpectralFunction::Kind::tabulated && !sf.interpolates())
        return SpectralFunction::tabulated(sf.table_omega(), sf.table_values(), true);
    return sf;
}

std::vector<double> sample(const SpectralFunction& sf, const std::vector<double>& grid)
{
    SpectralFunction f = interpolating(sf);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = f(grid[i]);
    out.front() = 0.0;
    out.back() = 0.0;
    return out;
}

} // namespace

SpectralFunction SpectralFunction::lorentzian(double kappa, double width, double center, double cutoff)
{
    require_finite(kappa, "kappa");
    require_finite(width, "width");
    require_finite(center, "center");
    require_finite(cutoff, "cutoff");
    if (kappa < 0.0)
        throw ConfigError("spectral function: kappa must be non-negative");
    if (width <= 0.0)
        throw ConfigError("spectral function: width must be positive");
    if (cutoff <= 0.0)
        throw ConfigError("spectral function: cutoff must be positive");
    SpectralFunction sf;
    sf.kind_ = Kind::lorentzian;
    sf.kappa_ = kappa;
    sf.width_ = width;
    sf.center_ = center;
    sf.cutoff_ = cutoff;
    return sf;
}

SpectralFunction SpectralFunction::flat(double level, double cutoff)
{
    require_finite(level, "level");
    require_finite(cutoff, "cutoff");
    if (level < 0.0)
        throw ConfigError("spectral function: level must be non-negative");
    if (cutoff <= 0.0)
        throw ConfigError("spectral function: cutoff must be positive");
    SpectralFunction sf;
    sf.kind_ = Kind::flat;
    sf.kappa_ = level;
    sf.cutoff_ = cutoff;
    return sf;
}

SpectralFunction SpectralFunction::tabulated(std::vector<double> omega, std::vector<double> values,
                                             bool interpolate)
{
    if (omega.size() != values.size())
        throw ConfigError("spectral table: omega and J differ in length");
    if (omega.size() < 2)
        throw ConfigError("spectral table: needs at least 2 points");
    if (omega.size() >= 3)
        uniform_step(omega, "spectral table");
    else if (!(omega[1] > omega[0]))
        throw ConfigError("spectral table: grid must be increasing");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        require_finite(omega[i], "omega");
        require_finite(values[i], "J");
        if (values[i] < 0.0)
            throw ConfigError("spectral table: J must be non-negative");
    }
    SpectralFunction sf;
    sf.kind_ = Kind::tabulated;
    sf.cutoff_ = std::max(std::abs(omega.front()), std::abs(omega.back()));
    sf.omega_ = std::move(omega);
    sf.values_ = std::move(values);
    sf.interpolate_ = interpolate;
    return sf;
}

std::pair<double, double> SpectralFunction::support() const
{
    if (kind_ == Kind::tabulated)
        return {omega_.front(), omega_.back()};
    return {-cutoff_, cutoff_};
}

double SpectralFunction::operator()(double omega) const
{
    switch (kind_) {
    case Kind::lorentzian: {
        if (std::abs(omega) > cutoff_)
            return 0.0;
        double x = omega - center_;
        return kappa_ * width_ / (x * x + width_ * width_);
    }
    case Kind::flat:
        return std::abs(omega) > cutoff_ ? 0.0 : kappa_;
    case Kind::tabulated: {
        if (omega < omega_.front() || omega > omega_.back())
            return 0.0;
        double h = (omega_.back() - omega_.front()) / static_cast<double>(omega_.size() - 1);
        double s = (omega - omega_.front()) / h;
        std::size_t i = std::min(static_cast<std::size_t>(s), omega_.size() - 2);
        double t = s - static_cast<double>(i);
        if (!interpolate_) {
            double tol = 1e-9;
            if (t < tol)
                return values_[i];
            if (t > 1.0 - tol)
                return values_[i + 1];
            throw ConfigError("spectral table: omega is off-grid and interpolation is disabled");
        }
        return (1.0 - t) * values_[i] + t * values_[i + 1];
    }
    }
    return 0.0;
}

std::pair<double, double> SpectralFunction::moments(double a, double b) const
{
    auto [lo, hi] = support();
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(b > a))
        return {0.0, 0.0};
    switch (kind_) {
    case Kind::lorentzian: {
        double xa = a - center_;
        double xb = b - center_;
        double m0 = kappa_ * (std::atan(xb / width_) - std::atan(xa / width_));
        double w2 = width_ * width_;
        double m1 = center_ * m0 + 0.5 * kappa_ * width_ * std::log((xb * xb + w2) / (xa * xa + w2));
        return {m0, m1};
    }
    case Kind::flat:
        return {kappa_ * (b - a), 0.5 * kappa_ * (b - a) * (b + a)};
    case Kind::tabulated: {
        double m0 = 0.0;
        double m1 = 0.0;
        SpectralFunction f = interpolating(*this);
        for (std::size_t i = 0; i + 1 < omega_.size(); ++i) {
            double u = std::max(a, omega_[i]);
            double v = std::min(b, omega_[i + 1]);
            if (!(v > u))
                continue;
            double ju = f(u);
            double jv = f(v);
            m0 += 0.5 * (v - u) * (ju + jv);
            m1 += (v - u) / 6.0 * (u * (2.0 * ju + jv) + v * (ju + 2.0 * jv));
        }
        return {m0, m1};
    }
    }
    return {0.0, 0.0};
}

double evaluate_spectral(const SpectralFunction& sf, double omega)
{
    return sf(omega);
}

double fermi_occupation(const BathThermalSpec& spec, double omega)
{
    double x = spec.beta * (omega - spec.mu);
    if (x > 0.0) {
        double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

std::vector<double> frequency_grid(const SpectralFunction& sf, std::size_t points, double margin_fraction)
{
    if (points < 3)
        throw ConfigError("frequency grid: needs at least 3 points");
    if (margin_fraction <= 0.0)
        throw ConfigError("frequency grid: margin must be positive");
    auto [a, b] = sf.support();
    double center = 0.5 * (a + b);
    double half = 0.5 * (b - a) * (1.0 + margin_fraction);
    double h = 2.0 * half / static_cast<double>(points - 1);
    double mid = 0.5 * static_cast<double>(points - 1);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = center + (static_cast<double>(i) - mid) * h;
    return grid;
}

std::vector<double> hilbert_transform_serial(std::span<const double> omega, std::span<const double> values)
{
    check_hilbert_input(omega, values);
    std::vector<double> kernel = kernel_table(values.size());
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = kernel_row(values, kernel, i);
    return out;
}

std::vector<double> hilbert_transform(std::span<const double> omega, std::span<const double> values)
{
    check_hilbert_input(omega, values);
    std::vector<double> kernel = kernel_table(values.size());
    std::vector<double> out(values.size());
    const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = kernel_row(values, kernel, static_cast<std::size_t>(i));
    return out;
}

double hilbert_exact(const SpectralFunction& sf, double omega)
{
    const double c = sf.cutoff();
    switch (sf.kind()) {
    case SpectralFunction::Kind::flat:
        return sf.level() / std::numbers::pi * std::log(std::abs((omega + c) / (omega - c)));
    case SpectralFunction::Kind::lorentzian: {
        const std::complex<double> a(sf.center(), sf.width());
        std::complex<double> num = std::log(c - a) - std::log(-c - a)
                                   + std::log(std::abs(omega + c)) - std::log(std::abs(omega - c));
        return sf.kappa() / std::numbers::pi * (num / (omega - a)).imag();
    }
    case SpectralFunction::Kind::tabulated:
        break;
    }
    throw ConfigError("hilbert_exact: no closed form for tabulated spectral functions");
}

void update_tail(ChainCoefficients& chain, double tolerance)
{
    const std::size_t d = chain.eps.size();
    if (d == 0 || chain.hop.empty()) {
        chain.eps_asym = chain.hop_asym = chain.tail_deviation = 0.0;
        chain.tail_converged = false;
        return;
    }
    auto tail_mean = [](const std::vector<double>& v, std::size_t m) {
        double s = 0.0;
        for (std::size_t i = v.size() - m; i < v.size(); ++i)
            s += v[i];
        return s / static_cast<double>(m);
    };
    std::size_t m = std::min(d, std::max<std::size_t>(3, d / 5));
    std::size_t mh = std::min(chain.hop.size(), m);
    chain.eps_asym = tail_mean(chain.eps, m);
    chain.hop_asym = tail_mean(chain.hop, mh);
    double dev = 0.0;
    for (std::size_t i = d - m; i < d; ++i)
        dev = std::max(dev, std::abs(chain.eps[i] - chain.eps_asym));
    for (std::size_t i = chain.hop.size() - mh; i < chain.hop.size(); ++i)
        dev = std::max(dev, std::abs(chain.hop[i] - chain.hop_asym));
    chain.tail_deviation = dev / chain.hop_asym;
    chain.tail_converged = chain.tail_deviation < tolerance;
}

ChainCoefficients chain_map_recursion(const SpectralFunction& sf, std::size_t depth, const ChainMapOptions& opts)
{
    if (depth < 1)
        throw ConfigError("chain_map_recursion: depth must be at least 1");
    std::vector<double> grid = frequency_grid(sf, opts.grid_points, opts.margin_fraction);
    const double h = grid[1] - grid[0];
    std::vector<double> J = sample(sf, grid);

    ChainCoefficients chain;
    double g0_sq = 0.0;
    for (std::size_t p = 0; p < depth; ++p) {
        double m0 = 0.0;
        double m1 = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            m0 += J[i];
            m1 += grid[i] * J[i];
        }
        m0 *= h;
        m1 *= h;
        if (p == 0) {
            auto [lo, hi] = sf.support();
            std::tie(m0, m1) = sf.moments(lo, hi);
        }
        double g_sq = m0 / two_pi;
        if (p == 0)
            g0_sq = g_sq;
        if (!(g_sq > 0.0) || !std::isfinite(g_sq) || (p > 0 && g_sq < 1e-12 * g0_sq))
            throw NumericalError("chain decouples / recursion unstable at depth " + std::to_string(p));
        chain.hop.push_back(std::sqrt(g_sq));
        chain.eps.push_back(m1 / m0);

        std::vector<double> JH = hilbert_transform(grid, J);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (J[i] > 0.0)
                J[i] = 4.0 * g_sq * J[i] / (JH[i] * JH[i] + J[i] * J[i]);
            else
                J[i] = 0.0;
        }
    }
    if (opts.residual) {
        chain.residual_omega = grid;
        chain.residual_J = std::move(J);
    }
    update_tail(chain, opts.tail_tolerance);
    return chain;
}

std::pair<std::vector<double>, std::vector<double>> discretize_bath(const SpectralFunction& sf, std::size_t n_modes)
{
    if (n_modes < 1)
        throw ConfigError("discretize_bath: n_modes must be positive");
    auto [a, b] = sf.support();
    double width = (b - a) / static_cast<double>(n_modes);
    std::vector<double> energies(n_modes);
    std::vector<double> weights(n_modes);
    for (std::size_t r = 0; r < n_modes; ++r) {
        double lo = a + static_cast<double>(r) * width;
        double hi = r + 1 == n_modes ? b : a + static_cast<double>(r + 1) * width;
        auto [m0, m1] = sf.moments(lo, hi);
        weights[r] = m0 / two_pi;
        energies[r] = m0 > 0.0 ? std::clamp(m1 / m0, lo, hi) : 0.5 * (lo + hi);
    }
    return {std::move(energies), std::move(weights)};
}

ChainCoefficients lanczos_chain(std::span<const double> energies, std::span<const double> weights,
                                std::size_t depth, double tail_tolerance)
{
    if (energies.size() != weights.size() || energies.empty())
        throw ConfigError("lanczos_chain: energies and weights must be non-empty and equal length");
    if (depth < 1)
        throw ConfigError("lanczos_chain: depth must be at least 1");
    const auto n = static_cast<Eigen::Index>(energies.size());
    Eigen::Map<const Eigen::VectorXd> omega(energies.data(), n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(weights[static_cast<std::size_t>(i)] >= 0.0))
            throw ConfigError("lanczos_chain: weights must be non-negative");
        w(i) = weights[static_cast<std::size_t>(i)];
    }
    double total = w.sum();
    if (!(total > 0.0))
        throw NumericalError("chain decouples / recursion unstable at depth 0");

    const double g0 = std::sqrt(total);
    const double scale = std::max(g0, omega.cwiseAbs().maxCoeff());
    const auto kmax = static_cast<Eigen::Index>(std::min<std::size_t>(depth, energies.size()));
    Eigen::MatrixXd Q(n, kmax);
    Q.col(0) = w.cwiseSqrt() / g0;

    ChainCoefficients chain;
    chain.hop.push_back(g0);
    for (Eigen::Index k = 0; k < kmax; ++k) {
        Eigen::VectorXd z = omega.cwiseProduct(Q.col(k));
        double a = Q.col(k).dot(z);
        chain.eps.push_back(a);
        if (static_cast<std::size_t>(k) + 1 == depth)
            break;
        z -= a * Q.col(k);
        if (k > 0)
            z -= chain.hop.back() * Q.col(k - 1);
        for (int pass = 0; pass < 2; ++pass) {
            auto basis = Q.leftCols(k + 1);
            z -= basis * (basis.transpose() * z);
        }
        double b = z.norm();
        if (k + 1 == kmax || b <= 1e-10 * scale) {
            chain.terminated = true;
            break;
        }
        Q.col(k + 1) = z / b;
        double overlap = (Q.leftCols(k + 1).transpose() * Q.col(k + 1)).cwiseAbs().maxCoeff();
        if (overlap > 1e-8)
            throw NumericalError("lanczos_chain: loss of orthogonality at depth " + std::to_string(k + 1));
        chain.hop.push_back(b);
    }
    update_tail(chain, tail_tolerance);
    return chain;
}

ChainCoefficients chain_map_tridiag(const SpectralFunction& sf, std::size_t n_modes, std::size_t depth,
                                    const ChainMapOptions& opts)
{
    if (depth < 1)
        throw ConfigError("chain_map_tridiag: depth must be at least 1");
    if (n_modes < 50 * depth)
        throw ConfigError("chain_map_tridiag: n_modes must be at least 50 x depth");
    auto [energies, weights] = discretize_bath(sf, n_modes);
    ChainCoefficients chain = lanczos_chain(energies, weights, depth, opts.tail_tolerance);
    if (opts.residual) {
        std::vector<double> grid = frequency_grid(sf, opts.grid_points, opts.margin_fraction);
        std::vector<double> J0 = sample(sf, grid);
        chain.residual_J = residual_spectral(grid, J0, chain, chain.depth());
        chain.residual_omega = std::move(grid);
    }
    return chain;
}

std::vector<double> residual_spectral(std::span<const double> omega, std::span<const double> J0,
                                      const ChainCoefficients& chain, std::size_t depth)
{
    if (depth > chain.depth() || depth > chain.hop.size())
        throw ConfigError("residual_spectral: depth exceeds the chain");
    std::vector<double> JH = hilbert_transform(omega, J0);
    std::vector<double> out(omega.size(), 0.0);
    for (std::size_t i = 0; i < omega.size(); ++i) {
        std::complex<double> sigma(0.5 * JH[i], -0.5 * J0[i]);
        bool alive = true;
        for (std::size_t p = 0; p < depth && alive; ++p) {
            if (std::abs(sigma) < 1e-300) {
                alive = false;
                break;
            }
            double g = chain.hop[p];
            sigma = omega[i] - chain.eps[p] - g * g / sigma;
        }
        out[i] = alive ? std::max(0.0, -2.0 * sigma.imag()) : 0.0;
    }
    return out;
}

void write_chain_csv(std::ostream& os, const ChainCoefficients& chain)
{
    os << "p,eps,hop\n";
    const std::size_t d = chain.depth();
    for (std::size_t p = 0; p <= d; ++p) {
        os << p << ',';
        if (p >= 1)
            os << csv::number(chain.eps[p - 1]);
        os << ',';
        if (p < chain.hop.size())
            os << csv::number(chain.hop[p]);
        os << '\n';
    }
}

ChainCoefficients read_chain_csv(std::istream& is, double tail_tolerance)
{
    csv::Table t = csv::read(is);
    int cp = t.column("p");
    int ce = t.column("eps");
    int ch = t.column("hop");
    if (cp < 0 || ce < 0 || ch < 0)
        throw ConfigError("chain csv: header must contain p,eps,hop");
    ChainCoefficients chain;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (csv::parse_number(row[static_cast<std::size_t>(cp)]) != static_cast<double>(r))
            throw ConfigError("chain csv: rows must be p = 0, 1, 2, ... in order");
        const std::string& e = row[static_cast<std::size_t>(ce)];
        const std::string& g = row[static_cast<std::size_t>(ch)];
        if (r >= 1) {
            if (e.empty())
                throw ConfigError("chain csv: missing eps at p = " + std::to_string(r));
            chain.eps.push_back(csv::parse_number(e));
        }
        if (!g.empty()) {
            if (chain.hop.size() != r)
                throw ConfigError("chain csv: hop column has a gap");
            double v = csv::parse_number(g);
            if (!(v > 0.0))
                throw ConfigError("chain csv: hoppings must be positive");
            chain.hop.push_back(v);
        }
    }
    if (chain.eps.empty() || chain.hop.size() < chain.eps.size())
        throw ConfigError("chain csv: need eps_1..eps_D and hop_0..hop_{D-1}");
    chain.hop.resize(chain.eps.size());
    update_tail(chain, tail_tolerance);
    return chain;
}

void write_spectral_csv(std::ostream& os, std::span<const double> omega, std::span<const double> values)
{
    os << "omega,J\n";
    for (std::size_t i = 0; i < omega.size(); ++i)
        os << csv::number(omega[i]) << ',' << csv::number(values[i]) << '\n';
}

SpectralFunction read_spectral_csv(std::istream& is, bool interpolate)
{
    csv::Table t = csv::read(is);
    int co = t.column("omega");
    int cj = t.column("J");
    if (co < 0 || cj < 0)
        throw ConfigError("spectral csv: header must contain omega,J");
    std::vector<double> omega;
    std::vector<double> values;
    for (const auto& row : t.rows) {
        omega.push_back(csv::parse_number(row[static_cast<std::size_t>(co)]));
        values.push_back(csv::parse_number(row[static_cast<std::size_t>(cj)]));
    }
    return SpectralFunction::tabulated(std::move(omega), std::move(values), interpolate);
}

} // namespace preb
