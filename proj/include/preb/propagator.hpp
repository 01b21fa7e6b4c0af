#pragma once

#include "preb/model_builder.hpp"
#include "preb/types.hpp"

#include <memory>

namespace preb {

// Eigendecomposition of a set-up Hamiltonian, reusable for every tau.
class SetupSpectrum {
public:
    explicit SetupSpectrum(const RMatrix& h);

    const RVector& energies() const { return energies_; }
    const RMatrix& vectors() const { return vectors_; }
    CMatrix propagator(double tau) const;

private:
    RVector energies_;
    RMatrix vectors_;
};

struct StepPropagator {
    CMatrix U;  // exp(-i H tau)
    double tau = 0.0;
    BlockRange system;
    std::array<BlockRange, 2> bath;

    CMatrix system_block() const;            // G_S
    CMatrix bath_to_system(int l) const;     // G_{B_l S}: bath rows, system columns
    CMatrix block(const BlockRange& rows, const BlockRange& cols) const;
};

StepPropagator step_propagator(const SetupHamiltonian& h, double tau);
StepPropagator step_propagator(const SetupSpectrum& spectrum, const SetupHamiltonian& h, double tau);

struct DriveMatrix {
    CMatrix value;
    double asymmetry = 0.0;
};

DriveMatrix drive_matrix(const StepPropagator& prop, const CorrelationMatrix& c_b1, const CorrelationMatrix& c_b2);

struct StabilityRate {
    double radius = 0.0;
    double rate = 0.0;  // -ln(radius)/tau
};

StabilityRate stability_rate(const CMatrix& g, double tau);

// Solve C - G^dagger C G = P.
CorrelationMatrix solve_dlyap_direct(const CMatrix& g, const CMatrix& p);
CorrelationMatrix solve_dlyap_doubling(const CMatrix& g, const CMatrix& p);
// Direct for up to 32 system sites, doubling above.
CorrelationMatrix solve_ness(const CMatrix& g, const CMatrix& p);

double lyapunov_residual(const CMatrix& c, const CMatrix& g, const CMatrix& p);

} // namespace preb
