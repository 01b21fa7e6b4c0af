#pragma once

#include "preb/dynamics.hpp"

#include <optional>
#include <string>

namespace preb {

enum class Regime { heat_engine, refrigerator, dud };

std::string to_string(Regime r);

struct CarnotReferences {
    double eta_c = 0.0;
    double cop_c = 0.0;
    double eta_ca = 0.0;
};

CarnotReferences carnot_references(double beta1, double beta2);

struct NessReport {
    double tau = 0.0;
    double P_ext = 0.0;
    double P_chem = 0.0;
    double P = 0.0;
    std::array<double, 2> Qdot{};
    std::array<double, 2> Ndot{};
    std::array<double, 2> Hdot_B{};
    std::array<double, 2> Hdot_SB{};
    double sigma = 0.0;
    double dU_rate = 0.0;   // zero at the fixed point
    double dS_rate = 0.0;   // zero at the fixed point
    std::array<double, 2> beta{};

    Regime regime = Regime::dud;
    std::optional<double> eta;
    std::optional<double> cop;
    double eta_c = 0.0;
    double cop_c = 0.0;
    double eta_ca = 0.0;

    double rate = 0.0;    // r = -ln(radius)/tau
    double radius = 0.0;
    std::optional<double> tau_r;     // estimate
    std::optional<long> copies;      // estimate

    double scale() const;
};

NessReport ness_rates(const CorrelationMatrix& c_ness, const SetupHamiltonian& h, const StepPropagator& prop,
                      const std::array<CorrelationMatrix, 2>& baths, const std::array<BathThermalSpec, 2>& specs,
                      double tau);

// Requires beta1 < beta2 (bath 1 hot).
void classify_regime(NessReport& report);

struct CollisionalPrediction {
    double ratio = 0.0;
    double eta0 = 0.0;
    double cop0 = 0.0;
    bool engine_window = false;
    bool fridge_window = false;
};

CollisionalPrediction collisional_limit(double omega01, double omega02, double mu, double beta1, double beta2);

std::array<double, 2> tight_coupling_check(const NessReport& report, std::array<double, 2> omega0, double mu);

} // namespace preb
