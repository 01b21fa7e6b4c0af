#pragma once

#include "preb/spectral_bath.hpp"
#include "preb/types.hpp"

#include <array>

namespace preb {

struct SystemSpec {
    RMatrix hamiltonian;
    std::array<int, 2> coupling_sites{0, 1};

    int sites() const { return static_cast<int>(hamiltonian.rows()); }
    void validate() const;

    // Two sites with hopping g; bath 1 on site 0, bath 2 on site 1.
    static SystemSpec two_site(double hopping = 1.0);
};

struct BlockRange {
    int offset = 0;
    int size = 0;
};

struct SetupHamiltonian {
    RMatrix matrix;
    BlockRange system;
    std::array<BlockRange, 2> bath;
    int chain_length = 0;

    int dimension() const { return static_cast<int>(matrix.rows()); }
    RMatrix system_block() const;
    RMatrix bath_block(int l) const;
};

int chain_length_for_tau(double g_B, double tau, int l0);

// Chains shorter than chain_length are padded with their tail averages.
SetupHamiltonian assemble_hamiltonian(const SystemSpec& sys, const std::array<ChainCoefficients, 2>& chains,
                                      int chain_length);

CorrelationMatrix thermal_correlation(const RMatrix& h_bath, const BathThermalSpec& spec);

long copies_required(double tau_r, double tau);
double rethermalization_estimate(double width, double tau_r_factor);

} // namespace preb
