#include "preb/dynamics.hpp"

#include "preb/errors.hpp"

#include <cmath>
#include <limits>

namespace preb {

namespace {

constexpr double entropy_clip = 1e-14;

double expectation(const RMatrix& h, const CMatrix& c)
{
    return (h.cast<cplx>().cwiseProduct(c)).sum().real();
}

// Restriction of a full set-up matrix to a pair of blocks (block symmetric part only).
RMatrix coupling_part(const RMatrix& h, const BlockRange& a, const BlockRange& b)
{
    RMatrix out = RMatrix::Zero(h.rows(), h.cols());
    out.block(a.offset, b.offset, a.size, b.size) = h.block(a.offset, b.offset, a.size, b.size);
    out.block(b.offset, a.offset, b.size, a.size) = h.block(b.offset, a.offset, b.size, a.size);
    return out;
}

RMatrix diagonal_part(const RMatrix& h, const BlockRange& a)
{
    RMatrix out = RMatrix::Zero(h.rows(), h.cols());
    out.block(a.offset, a.offset, a.size, a.size) = h.block(a.offset, a.offset, a.size, a.size);
    return out;
}

double block_trace(const CMatrix& c, const BlockRange& a)
{
    return c.block(a.offset, a.offset, a.size, a.size).trace().real();
}

} // namespace

CorrelationMatrix preb_step(const CorrelationMatrix& c, const StepPropagator& prop, const DriveMatrix& drive)
{
    CMatrix g = prop.system_block();
    if (c.rows() != g.rows() || c.cols() != g.cols())
        throw ConfigError("preb_step: correlation matrix does not match the system block");
    CMatrix out = g.adjoint() * c * g + drive.value;
    return 0.5 * (out + out.adjoint());
}

Trajectory preb_trajectory(const CorrelationMatrix& c0, int steps, const StepPropagator& prop,
                           const DriveMatrix& drive)
{
    if (steps < 1)
        throw ConfigError("preb_trajectory: steps must be at least 1");
    CMatrix ness;
    bool has_ness = true;
    try {
        ness = solve_ness(prop.system_block(), drive.value);
    } catch (const NoUniqueNessError&) {
        has_ness = false;
    }
    Trajectory t;
    t.states.reserve(static_cast<std::size_t>(steps));
    CorrelationMatrix c = c0;
    for (int m = 0; m < steps; ++m) {
        c = preb_step(c, prop, drive);
        t.states.push_back(c);
        t.distance_to_ness.push_back(has_ness ? max_abs(CMatrix(c - ness))
                                              : std::numeric_limits<double>::quiet_NaN());
    }
    return t;
}

double gaussian_entropy(const CorrelationMatrix& c)
{
    if (c.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("gaussian_entropy: eigendecomposition failed");
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double nu = std::clamp(es.eigenvalues()(k), entropy_clip, 1.0 - entropy_clip);
        s -= nu * std::log(nu) + (1.0 - nu) * std::log1p(-nu);
    }
    return s;
}

StepThermo step_thermodynamics(const CorrelationMatrix& c_s_start, const SetupHamiltonian& h,
                               const StepPropagator& prop, const std::array<CorrelationMatrix, 2>& baths,
                               const std::array<BathThermalSpec, 2>& specs)
{
    const int n = h.dimension();
    const BlockRange& s = h.system;
    if (c_s_start.rows() != s.size || c_s_start.cols() != s.size)
        throw ConfigError("step_thermodynamics: system correlation matrix has wrong size");
    if (prop.U.rows() != n)
        throw ConfigError("step_thermodynamics: propagator does not match the Hamiltonian");

    CMatrix c0 = CMatrix::Zero(n, n);
    c0.block(s.offset, s.offset, s.size, s.size) = c_s_start;
    double filled = c_s_start.trace().real();
    for (std::size_t l = 0; l < 2; ++l) {
        const BlockRange& b = h.bath[l];
        if (baths[l].rows() != b.size || baths[l].cols() != b.size)
            throw ConfigError("step_thermodynamics: bath correlation matrix has wrong size");
        c0.block(b.offset, b.offset, b.size, b.size) = baths[l];
        filled += baths[l].trace().real();
    }

    // changes are taken on C - cI, c the nearest pure filling
    const double shift = filled > 0.5 * n ? 1.0 : 0.0;
    CMatrix shifted = c0 - shift * CMatrix::Identity(n, n);
    // C(tau) = U^dagger C(0) U for C = <d^dagger d> and U = exp(-iH tau)
    CMatrix delta = prop.U.adjoint() * shifted * prop.U - shifted;
    delta = 0.5 * (delta + delta.adjoint());

    StepThermo t;
    t.C_S_end = c_s_start + delta.block(s.offset, s.offset, s.size, s.size);
    t.C_S_end = 0.5 * (t.C_S_end + t.C_S_end.adjoint());

    t.delta_U = expectation(diagonal_part(h.matrix, s), delta);
    t.dN_S = block_trace(delta, s);
    for (std::size_t l = 0; l < 2; ++l) {
        const BlockRange& b = h.bath[l];
        t.dH_B[l] = expectation(diagonal_part(h.matrix, b), delta);
        t.dH_SB[l] = expectation(coupling_part(h.matrix, s, b), delta);
        t.dN_B[l] = block_trace(delta, b);
        t.Q[l] = t.dH_B[l] - specs[l].mu * t.dN_B[l];
        t.W_ext -= t.dH_SB[l];
        t.W_chem -= specs[l].mu * t.dN_B[l];
    }
    t.S_before = gaussian_entropy(c_s_start);
    t.S_after = gaussian_entropy(t.C_S_end);
    t.dS = t.S_before - t.S_after;
    t.Sigma = specs[0].beta * t.Q[0] + specs[1].beta * t.Q[1] - t.dS;
    return t;
}

ThermoTotals cumulative_thermo(std::span<const StepThermo> steps, double tau)
{
    ThermoTotals tot;
    for (const StepThermo& s : steps) {
        ++tot.steps;
        tot.delta_U += s.delta_U;
        tot.W_ext += s.W_ext;
        tot.W_chem += s.W_chem;
        tot.dS += s.dS;
        tot.Sigma += s.Sigma;
        for (std::size_t l = 0; l < 2; ++l) {
            tot.Q[l] += s.Q[l];
            tot.dN_B[l] += s.dN_B[l];
        }
    }
    if (tot.steps == 0)
        return tot;
    if (!(tau > 0.0))
        throw ConfigError("cumulative_thermo: tau must be positive");
    double t = tot.steps * tau;
    tot.P_ext_rate = tot.W_ext / t;
    tot.P_chem_rate = tot.W_chem / t;
    tot.Sigma_rate = tot.Sigma / t;
    for (std::size_t l = 0; l < 2; ++l) {
        tot.Q_rate[l] = tot.Q[l] / t;
        tot.N_rate[l] = tot.dN_B[l] / t;
    }
    return tot;
}

} // namespace preb
