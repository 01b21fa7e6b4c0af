#include "preb/model_builder.hpp"

#include "preb/errors.hpp"

#include <cmath>

namespace preb {

void SystemSpec::validate() const
{
    const auto n = hamiltonian.rows();
    if (n < 1 || hamiltonian.cols() != n)
        throw ConfigError("system: Hamiltonian must be square and non-empty");
    if (!hamiltonian.allFinite())
        throw ConfigError("system: Hamiltonian has non-finite entries");
    if (max_abs(RMatrix(hamiltonian - hamiltonian.transpose())) > 1e-12)
        throw ConfigError("system: Hamiltonian must be symmetric");
    for (int s : coupling_sites) {
        if (s < 0 || s >= n)
            throw ConfigError("system: coupling site " + std::to_string(s) + " out of range");
    }
}

SystemSpec SystemSpec::two_site(double hopping)
{
    SystemSpec s;
    s.hamiltonian = RMatrix::Zero(2, 2);
    s.hamiltonian(0, 1) = s.hamiltonian(1, 0) = hopping;
    s.coupling_sites = {0, 1};
    return s;
}

RMatrix SetupHamiltonian::system_block() const
{
    return matrix.block(system.offset, system.offset, system.size, system.size);
}

RMatrix SetupHamiltonian::bath_block(int l) const
{
    const BlockRange& b = bath.at(static_cast<std::size_t>(l));
    return matrix.block(b.offset, b.offset, b.size, b.size);
}

int chain_length_for_tau(double g_B, double tau, int l0)
{
    if (!(g_B > 0.0) || !(tau > 0.0))
        throw ConfigError("chain_length_for_tau: g_B and tau must be positive");
    if (l0 < 0)
        throw ConfigError("chain_length_for_tau: L0 must be non-negative");
    return static_cast<int>(std::ceil(g_B * tau)) + l0;
}

SetupHamiltonian assemble_hamiltonian(const SystemSpec& sys, const std::array<ChainCoefficients, 2>& chains,
                                      int chain_length)
{
    sys.validate();
    if (chain_length < 1)
        throw ConfigError("assemble_hamiltonian: chain length must be at least 1");
    const int ls = sys.sites();
    const int lb = chain_length;

    SetupHamiltonian h;
    h.chain_length = lb;
    h.system = {0, ls};
    h.bath[0] = {ls, lb};
    h.bath[1] = {ls + lb, lb};
    h.matrix = RMatrix::Zero(ls + 2 * lb, ls + 2 * lb);
    h.matrix.topLeftCorner(ls, ls) = 0.5 * (sys.hamiltonian + sys.hamiltonian.transpose());

    for (int l = 0; l < 2; ++l) {
        const ChainCoefficients& c = chains[static_cast<std::size_t>(l)];
        const int depth = static_cast<int>(c.depth());
        if (depth < 1 || static_cast<int>(c.hop.size()) < depth)
            throw ConfigError("assemble_hamiltonian: bath " + std::to_string(l + 1) + " chain is empty or inconsistent");
        if (depth < lb) {
            if (c.terminated)
                throw ConfigError("assemble_hamiltonian: bath " + std::to_string(l + 1)
                                  + " has only " + std::to_string(depth) + " chain sites");
            if (!c.tail_converged)
                throw NumericalError("assemble_hamiltonian: bath " + std::to_string(l + 1)
                                     + " chain needs padding but its tail has not converged");
        }
        auto eps = [&](int p) { return p < depth ? c.eps[static_cast<std::size_t>(p)] : c.eps_asym; };
        auto hop = [&](int p) { return p < depth ? c.hop[static_cast<std::size_t>(p)] : c.hop_asym; };

        const int off = h.bath[static_cast<std::size_t>(l)].offset;
        const int site = sys.coupling_sites[static_cast<std::size_t>(l)];
        h.matrix(site, off) = h.matrix(off, site) = hop(0);
        for (int p = 0; p < lb; ++p) {
            h.matrix(off + p, off + p) = eps(p);
            if (p + 1 < lb)
                h.matrix(off + p, off + p + 1) = h.matrix(off + p + 1, off + p) = hop(p + 1);
        }
    }
    return h;
}

CorrelationMatrix thermal_correlation(const RMatrix& h_bath, const BathThermalSpec& spec)
{
    if (h_bath.rows() != h_bath.cols())
        throw ConfigError("thermal_correlation: block must be square");
    if (!(spec.beta > 0.0) || !std::isfinite(spec.mu))
        throw ConfigError("thermal_correlation: beta must be positive and mu finite");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(h_bath);
    if (es.info() != Eigen::Success)
        throw NumericalError("thermal_correlation: eigendecomposition failed");
    RVector occ = es.eigenvalues().unaryExpr([&](double e) { return fermi_occupation(spec, e); });
    RMatrix c = es.eigenvectors() * occ.asDiagonal() * es.eigenvectors().transpose();
    return (0.5 * (c + c.transpose())).cast<cplx>();
}

long copies_required(double tau_r, double tau)
{
    if (!(tau > 0.0) || !(tau_r > 0.0))
        throw ConfigError("copies_required: times must be positive");
    return static_cast<long>(std::ceil(tau_r / tau)) + 1;
}

double rethermalization_estimate(double width, double tau_r_factor)
{
    if (!(width > 0.0) || !(tau_r_factor > 0.0))
        throw ConfigError("rethermalization_estimate: width and factor must be positive");
    return tau_r_factor / (2.0 * width);
}

} // namespace preb
