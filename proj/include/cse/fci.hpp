#pragma once

#include "cse/fockspace.hpp"

namespace cse {

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending, e_nuc included
    std::vector<StateVector> eigenvectors;
    std::vector<int> multiplicities;
};

// Dense symmetric diagonalization of the sector Hamiltonian; the oracle for
// everything downstream. Sector dimension capped at desk scale.
Spectrum fci_spectrum(const SpinOrbitalHamiltonian& H, const DeterminantBasis& basis,
                      int n_states);

double correlation_energy(const Spectrum& spectrum, const ScfResult& scf);

}  // namespace cse
