#include "preb/propagator.hpp"

#include "preb/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace preb {

namespace {

constexpr double radius_limit = 1.0 - 1e-12;

void require_stable(const CMatrix& g)
{
    double r = stability_rate(g, 1.0).radius;
    if (r >= radius_limit)
        throw NoUniqueNessError("no unique NESS at this tau: spectral radius of G_S is " + std::to_string(r));
}

void require_square_pair(const CMatrix& g, const CMatrix& p, const char* who)
{
    if (g.rows() != g.cols() || p.rows() != g.rows() || p.cols() != g.cols())
        throw ConfigError(std::string(who) + ": G and P must be square and of equal size");
}

CMatrix hermitian_part(const CMatrix& m)
{
    return 0.5 * (m + m.adjoint());
}

} // namespace

SetupSpectrum::SetupSpectrum(const RMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("step_propagator: eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

CMatrix SetupSpectrum::propagator(double tau) const
{
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw ConfigError("step_propagator: tau must be non-negative");
    Eigen::VectorXcd phase = energies_.unaryExpr([tau](double e) { return std::exp(cplx(0.0, -e * tau)); });
    CMatrix v = vectors_.cast<cplx>();
    return v * phase.asDiagonal() * v.transpose();
}

CMatrix StepPropagator::block(const BlockRange& rows, const BlockRange& cols) const
{
    return U.block(rows.offset, cols.offset, rows.size, cols.size);
}

CMatrix StepPropagator::system_block() const
{
    return block(system, system);
}

CMatrix StepPropagator::bath_to_system(int l) const
{
    return block(bath.at(static_cast<std::size_t>(l)), system);
}

StepPropagator step_propagator(const SetupSpectrum& spectrum, const SetupHamiltonian& h, double tau)
{
    if (spectrum.energies().size() != h.matrix.rows())
        throw ConfigError("step_propagator: spectrum does not match the Hamiltonian");
    StepPropagator prop;
    prop.U = spectrum.propagator(tau);
    prop.tau = tau;
    prop.system = h.system;
    prop.bath = h.bath;
    const auto n = prop.U.rows();
    double defect = max_abs(CMatrix(prop.U.adjoint() * prop.U - CMatrix::Identity(n, n)));
    if (defect > 1e-10)
        throw NumericalError("step_propagator: propagator not unitary (defect " + std::to_string(defect) + ")");
    return prop;
}

StepPropagator step_propagator(const SetupHamiltonian& h, double tau)
{
    return step_propagator(SetupSpectrum(h.matrix), h, tau);
}

DriveMatrix drive_matrix(const StepPropagator& prop, const CorrelationMatrix& c_b1, const CorrelationMatrix& c_b2)
{
    const CorrelationMatrix* cb[2] = {&c_b1, &c_b2};
    const int ls = prop.system.size;
    CMatrix p = CMatrix::Zero(ls, ls);
    for (int l = 0; l < 2; ++l) {
        const CorrelationMatrix& c = *cb[l];
        const int lb = prop.bath[static_cast<std::size_t>(l)].size;
        if (c.rows() != lb || c.cols() != lb)
            throw ConfigError("drive_matrix: bath " + std::to_string(l + 1) + " correlation has wrong size");
        CMatrix gbs = prop.bath_to_system(l);
        p += gbs.adjoint() * c * gbs;
    }
    DriveMatrix d;
    d.asymmetry = max_abs(CMatrix(p - p.adjoint()));
    if (d.asymmetry > 1e-8)
        throw NumericalError("drive_matrix: asymmetry " + std::to_string(d.asymmetry) + " above 1e-8");
    d.value = hermitian_part(p);
    return d;
}

StabilityRate stability_rate(const CMatrix& g, double tau)
{
    if (!(tau > 0.0))
        throw ConfigError("stability_rate: tau must be positive");
    StabilityRate s;
    if (g.size() == 0)
        return s;
    Eigen::ComplexEigenSolver<CMatrix> es(g, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("stability_rate: eigenvalue computation failed");
    s.radius = es.eigenvalues().cwiseAbs().maxCoeff();
    s.rate = -std::log(s.radius) / tau;
    return s;
}

CorrelationMatrix solve_dlyap_direct(const CMatrix& g, const CMatrix& p)
{
    require_square_pair(g, p, "solve_dlyap_direct");
    require_stable(g);
    const auto n = g.rows();
    const auto n2 = n * n;
    // vec(G^dagger C G) = (G^T kron G^dagger) vec(C), column-major vec
    CMatrix gd = g.adjoint();
    CMatrix a = CMatrix::Identity(n2, n2);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            a.block(i * n, j * n, n, n) -= g(j, i) * gd;
    Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(p.data(), n2);
    Eigen::VectorXcd x = a.partialPivLu().solve(rhs);
    if (!x.allFinite())
        throw NumericalError("solve_dlyap_direct: linear solve produced non-finite entries");
    CMatrix c = Eigen::Map<CMatrix>(x.data(), n, n);
    return hermitian_part(c);
}

CorrelationMatrix solve_dlyap_doubling(const CMatrix& g, const CMatrix& p)
{
    require_square_pair(g, p, "solve_dlyap_doubling");
    require_stable(g);
    CMatrix s = p;
    CMatrix a = g;
    for (int k = 0; k < 200; ++k) {
        CMatrix update = a.adjoint() * s * a;
        s += update;
        if (max_abs(update) < 1e-14 * std::max(1.0, max_abs(s)))
            return hermitian_part(s);
        a = a * a;
    }
    throw NumericalError("solve_dlyap_doubling: no convergence after 200 doublings");
}

CorrelationMatrix solve_ness(const CMatrix& g, const CMatrix& p)
{
    return g.rows() <= 32 ? solve_dlyap_direct(g, p) : solve_dlyap_doubling(g, p);
}

double lyapunov_residual(const CMatrix& c, const CMatrix& g, const CMatrix& p)
{
    return max_abs(CMatrix(c - g.adjoint() * c * g - p));
}

} // namespace preb
