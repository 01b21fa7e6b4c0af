#include "preb/ness_thermo.hpp"

#include "preb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace preb {

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::heat_engine:
        return "heat-engine";
    case Regime::refrigerator:
        return "refrigerator";
    case Regime::dud:
        return "dud";
    }
    return "dud";
}

CarnotReferences carnot_references(double beta1, double beta2)
{
    if (!(beta1 > 0.0) || !(beta2 > 0.0))
        throw ConfigError("inverse temperatures must be positive");
    if (beta1 >= beta2)
        throw ConfigError("bath 1 must be hot (beta1 < beta2)");
    CarnotReferences c;
    c.eta_c = 1.0 - beta1 / beta2;
    c.cop_c = 1.0 / (beta2 / beta1 - 1.0);
    c.eta_ca = 1.0 - std::sqrt(beta1 / beta2);
    return c;
}

double NessReport::scale() const
{
    return std::max({std::abs(P_ext), std::abs(P_chem), std::abs(Qdot[0]), std::abs(Qdot[1]), 1e-300});
}

NessReport ness_rates(const CorrelationMatrix& c_ness, const SetupHamiltonian& h, const StepPropagator& prop,
                      const std::array<CorrelationMatrix, 2>& baths, const std::array<BathThermalSpec, 2>& specs,
                      double tau)
{
    if (!(tau > 0.0))
        throw ConfigError("ness_rates: tau must be positive");
    StepThermo st = step_thermodynamics(c_ness, h, prop, baths, specs);
    double residual = max_abs(CMatrix(st.C_S_end - c_ness));
    if (residual > 1e-9 * std::max(1.0, max_abs(c_ness)))
        throw NumericalError("ness_rates: state is not a fixed point of the cycle (residual "
                             + std::to_string(residual) + ")");

    NessReport r;
    r.tau = tau;
    for (std::size_t l = 0; l < 2; ++l) {
        r.Qdot[l] = st.Q[l] / tau;
        r.Ndot[l] = st.dN_B[l] / tau;
        r.Hdot_B[l] = st.dH_B[l] / tau;
        r.Hdot_SB[l] = st.dH_SB[l] / tau;
        r.beta[l] = specs[l].beta;
    }
    r.P_ext = st.W_ext / tau;
    // fixed-point form of -sum_l mu_l dN_l
    r.P_chem = -0.5 * (specs[0].mu - specs[1].mu) * (st.dN_B[0] - st.dN_B[1]) / tau;
    r.P = r.P_ext + r.P_chem;
    r.sigma = specs[0].beta * r.Qdot[0] + specs[1].beta * r.Qdot[1];
    r.dU_rate = st.delta_U / tau;
    r.dS_rate = st.dS / tau;
    StabilityRate sr = stability_rate(prop.system_block(), tau);
    r.radius = sr.radius;
    r.rate = sr.rate;
    return r;
}

void classify_regime(NessReport& report)
{
    CarnotReferences c = carnot_references(report.beta[0], report.beta[1]);
    report.eta_c = c.eta_c;
    report.cop_c = c.cop_c;
    report.eta_ca = c.eta_ca;
    report.eta.reset();
    report.cop.reset();

    const double band = 1e-12 * report.scale() + 1e-300;
    if (report.P < -band && report.Qdot[0] < -band) {
        report.regime = Regime::heat_engine;
        report.eta = report.P / report.Qdot[0];
    } else if (report.Qdot[1] < -band && report.P > band) {
        report.regime = Regime::refrigerator;
        report.cop = -report.Qdot[1] / report.P;
    } else {
        report.regime = Regime::dud;
    }
}

CollisionalPrediction collisional_limit(double omega01, double omega02, double mu, double beta1, double beta2)
{
    if (omega01 == mu)
        throw ConfigError("collisional_limit: omega01 equals mu, ratio undefined");
    CollisionalPrediction p;
    p.ratio = (omega02 - mu) / (omega01 - mu);
    p.eta0 = 1.0 - p.ratio;
    p.cop0 = p.ratio / (1.0 - p.ratio);
    double b = beta1 / beta2;
    p.engine_window = b < p.ratio && p.ratio < 1.0;
    p.fridge_window = 0.0 < p.ratio && p.ratio < b;
    return p;
}

std::array<double, 2> tight_coupling_check(const NessReport& report, std::array<double, 2> omega0, double mu)
{
    return {std::abs(report.Qdot[0] - (omega0[0] - mu) * report.Ndot[0]),
            std::abs(report.Qdot[1] - (omega0[1] - mu) * report.Ndot[1])};
}

} // namespace preb
