#include "cse/fci.hpp"

#include <stdexcept>

namespace cse {

Spectrum fci_spectrum(const SpinOrbitalHamiltonian& H, const DeterminantBasis& basis,
                      int n_states) {
    if (basis.size() > 10000)
        throw std::domain_error("fci_spectrum: sector dimension exceeds the 10000 cap");
    const Eigen::MatrixXd M = kernels::dense_hamiltonian(H, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const int n = std::min<int>(n_states, basis.size());
    Spectrum sp;
    for (int k = 0; k < n; ++k) {
        sp.eigenvalues.push_back(es.eigenvalues()[k]);
        StateVector v{&basis, es.eigenvectors().col(k)};
        sp.multiplicities.push_back(multiplicity(v));
        sp.eigenvectors.push_back(std::move(v));
    }
    return sp;
}

double correlation_energy(const Spectrum& spectrum, const ScfResult& scf) {
    return spectrum.eigenvalues.at(0) - scf.e_hf;
}

}  // namespace cse
