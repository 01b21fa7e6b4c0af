#pragma once

#include "preb/model_builder.hpp"
#include "preb/spectral_bath.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

namespace preb {

// Retarded lead self-energy Sigma = (J^H - iJ)/2; level width Gamma = J.
class LeadSelfEnergy {
public:
    explicit LeadSelfEnergy(const SpectralFunction& sf);

    std::complex<double> operator()(double omega) const;
    double width(double omega) const { return sf_(omega); }
    const SpectralFunction& spectral() const { return sf_; }

private:
    SpectralFunction sf_;
    std::vector<double> grid_;
    std::vector<double> hilbert_;
};

std::complex<double> lead_self_energy(const SpectralFunction& sf, double omega);

struct NegfReport {
    double I = 0.0;   // particle current from bath 1 into bath 2
    double J = 0.0;   // energy current from bath 1 into bath 2
    std::array<double, 2> Qdot{};
    double P_chem = 0.0;
    double sigma = 0.0;
    std::vector<double> occupations;
    double error_estimate = 0.0;
    int singular_points = 0;
};

struct NegfOptions {
    double relative_tolerance = 1e-11;
    double window_margin = 0.05;
    unsigned max_subdivisions = 20000;
};

class LandauerModel {
public:
    LandauerModel(const SystemSpec& system, const std::array<SpectralFunction, 2>& leads);

    // Retarded Green function of the system at real omega.
    CMatrix retarded(double omega, bool* singular = nullptr) const;
    double transmission(double omega) const;
    std::pair<double, double> window(double margin) const;
    std::vector<double> breakpoints(double margin) const;

    const SystemSpec& system() const { return system_; }
    const LeadSelfEnergy& lead(int l) const { return leads_[static_cast<std::size_t>(l)]; }

private:
    SystemSpec system_;
    std::array<LeadSelfEnergy, 2> leads_;
};

NegfReport landauer_currents(const SystemSpec& system, const std::array<SpectralFunction, 2>& leads,
                             const std::array<BathThermalSpec, 2>& specs, const NegfOptions& opts = {});

void write_transmission_csv(std::ostream& os, const LandauerModel& model, std::size_t points);

} // namespace preb
