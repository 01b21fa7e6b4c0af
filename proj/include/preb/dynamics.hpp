#pragma once

#include "preb/model_builder.hpp"
#include "preb/propagator.hpp"

#include <span>
#include <vector>

namespace preb {

CorrelationMatrix preb_step(const CorrelationMatrix& c, const StepPropagator& prop, const DriveMatrix& drive);

struct Trajectory {
    std::vector<CorrelationMatrix> states;  // states[m] after m+1 steps
    std::vector<double> distance_to_ness;   // max-entry distance, NaN when no unique NESS
};

Trajectory preb_trajectory(const CorrelationMatrix& c0, int steps, const StepPropagator& prop,
                           const DriveMatrix& drive);

// -sum nu ln nu + (1-nu) ln(1-nu) over the eigenvalues of C, clipped to [1e-14, 1-1e-14].
double gaussian_entropy(const CorrelationMatrix& c);

struct StepThermo {
    double delta_U = 0.0;
    double W_ext = 0.0;
    double W_chem = 0.0;
    std::array<double, 2> Q{};
    double dS = 0.0;     // S before minus S after
    double Sigma = 0.0;
    std::array<double, 2> dN_B{};
    std::array<double, 2> dH_B{};
    std::array<double, 2> dH_SB{};
    double dN_S = 0.0;
    double S_before = 0.0;
    double S_after = 0.0;
    CorrelationMatrix C_S_end;
};

StepThermo step_thermodynamics(const CorrelationMatrix& c_s_start, const SetupHamiltonian& h,
                               const StepPropagator& prop, const std::array<CorrelationMatrix, 2>& baths,
                               const std::array<BathThermalSpec, 2>& specs);

struct ThermoTotals {
    int steps = 0;
    double delta_U = 0.0;
    double W_ext = 0.0;
    double W_chem = 0.0;
    std::array<double, 2> Q{};
    double dS = 0.0;
    double Sigma = 0.0;
    std::array<double, 2> dN_B{};
    // Totals divided by steps * tau; zero when empty.
    double P_ext_rate = 0.0;
    double P_chem_rate = 0.0;
    std::array<double, 2> Q_rate{};
    std::array<double, 2> N_rate{};
    double Sigma_rate = 0.0;
};

ThermoTotals cumulative_thermo(std::span<const StepThermo> steps, double tau);

} // namespace preb
