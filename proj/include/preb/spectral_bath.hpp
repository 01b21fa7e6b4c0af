#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace preb {

// Bath coupling density J(omega) with a hard support.
class SpectralFunction {
public:
    enum class Kind { lorentzian, flat, tabulated };

    // J = kappa*width/((w-center)^2 + width^2) on [-cutoff, cutoff].
    static SpectralFunction lorentzian(double kappa, double width, double center, double cutoff);
    // J = level on [-cutoff, cutoff].
    static SpectralFunction flat(double level, double cutoff);
    // Uniformly spaced samples; linear interpolation between nodes, zero outside.
    static SpectralFunction tabulated(std::vector<double> omega, std::vector<double> values,
                                      bool interpolate = true);

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double width() const { return width_; }
    double center() const { return center_; }
    double cutoff() const { return cutoff_; }
    double level() const { return kappa_; }
    const std::vector<double>& table_omega() const { return omega_; }
    const std::vector<double>& table_values() const { return values_; }
    bool interpolates() const { return interpolate_; }

    // Closed interval outside of which J vanishes.
    std::pair<double, double> support() const;
    double operator()(double omega) const;

    // Integrals of J and omega*J over [a, b], exact for every kind.
    std::pair<double, double> moments(double a, double b) const;

private:
    Kind kind_ = Kind::flat;
    double kappa_ = 0.0;
    double width_ = 0.0;
    double center_ = 0.0;
    double cutoff_ = 0.0;
    std::vector<double> omega_;
    std::vector<double> values_;
    bool interpolate_ = true;
};

struct BathThermalSpec {
    double beta = 1.0;
    double mu = 0.0;
};

double evaluate_spectral(const SpectralFunction& sf, double omega);
double fermi_occupation(const BathThermalSpec& spec, double omega);

// Uniform grid over the support widened by margin_fraction of the half width on each side.
std::vector<double> frequency_grid(const SpectralFunction& sf, std::size_t points = 8192,
                                   double margin_fraction = 0.05);

// (1/pi) PV int J(w')/(w - w') dw' for J piecewise linear between uniform nodes.
// J must vanish at both grid ends.
std::vector<double> hilbert_transform(std::span<const double> omega, std::span<const double> values);
std::vector<double> hilbert_transform_serial(std::span<const double> omega,
                                             std::span<const double> values);

// Closed-form transform for the lorentzian and flat kinds.
double hilbert_exact(const SpectralFunction& sf, double omega);

struct ChainCoefficients {
    std::vector<double> eps;  // eps_1 .. eps_D
    std::vector<double> hop;  // g_0 .. g_{D-1}, g_0 couples the system to site 1
    double eps_asym = 0.0;
    double hop_asym = 0.0;
    double tail_deviation = 0.0;  // relative to hop_asym
    bool tail_converged = false;
    bool terminated = false;      // the bath is exhausted before the requested depth
    std::vector<double> residual_omega;
    std::vector<double> residual_J;

    std::size_t depth() const { return eps.size(); }
};

// Recomputes eps_asym, hop_asym and the tail diagnostics.
void update_tail(ChainCoefficients& chain, double tolerance = 0.05);

struct ChainMapOptions {
    std::size_t grid_points = 8192;
    double margin_fraction = 0.05;
    double tail_tolerance = 0.05;
    bool residual = true;
};

ChainCoefficients chain_map_recursion(const SpectralFunction& sf, std::size_t depth,
                                      const ChainMapOptions& opts = {});

// Bins the support into n_modes equal cells; weight (1/2pi) int_bin J, energy its first moment.
std::pair<std::vector<double>, std::vector<double>> discretize_bath(const SpectralFunction& sf,
                                                                    std::size_t n_modes);

// Lanczos tridiagonalization of diag(energies) from the normalized coupling vector.
ChainCoefficients lanczos_chain(std::span<const double> energies, std::span<const double> weights,
                                std::size_t depth, double tail_tolerance = 0.05);

ChainCoefficients chain_map_tridiag(const SpectralFunction& sf, std::size_t n_modes,
                                    std::size_t depth, const ChainMapOptions& opts = {});

// Continued-fraction peeling of J by the first `depth` chain coefficients.
std::vector<double> residual_spectral(std::span<const double> omega, std::span<const double> J0,
                                      const ChainCoefficients& chain, std::size_t depth);

void write_chain_csv(std::ostream& os, const ChainCoefficients& chain);
ChainCoefficients read_chain_csv(std::istream& is, double tail_tolerance = 0.05);
void write_spectral_csv(std::ostream& os, std::span<const double> omega,
                        std::span<const double> values);
SpectralFunction read_spectral_csv(std::istream& is, bool interpolate = true);

} // namespace preb
