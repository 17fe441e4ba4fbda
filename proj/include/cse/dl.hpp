#pragma once

#include "cse/fci.hpp"
#include "cse/fockspace.hpp"

namespace cse {

// H_lambda = h0 + lambda * v. v is carried in the same container as a
// Hamiltonian (one-body matrix, antisymmetrized two-body tensor, constant).
struct PerturbationSplit {
    SpinOrbitalHamiltonian h0;
    SpinOrbitalHamiltonian v;
    double lambda = 0.0;

    SpinOrbitalHamiltonian assemble() const;
};

// Full four-index residual over all spin-orbital quadruples.
struct ResidualTensor {
    int n_so = 0;
    std::vector<double> r;  // dense n_so^4
    double frobenius_norm = 0.0;

    double at(int i, int j, int k, int l) const {
        return r[((i * n_so + j) * std::size_t(n_so) + k) * n_so + l];
    }
};

// Residual of the projected eigenvalue equation: R_ijkl = <psi| a+i a+j al ak |phi>
// with phi = (H - E)|psi> / <psi|psi> and E the Rayleigh quotient.
std::pair<double, ResidualTensor> energy_and_residual(const SpinOrbitalHamiltonian& H,
                                                      const StateVector& psi);

// Antisymmetric expansion of the ordered-quadruple contraction vector.
ResidualTensor expand_residual(int n_so, const Eigen::VectorXd& ordered);

double dispersion(const SpinOrbitalHamiltonian& H, const StateVector& psi);

struct DlSolveReport {
    int rank = 2;
    TwoBodyCoefficients F;
    double dl_cse_error = 0.0;   // Frobenius norm of the projected-equation residual
    double dl_error = 0.0;       // norm of the full-space residual vector
    double sigma_min = 0.0, sigma_max = 0.0;  // design-matrix conditioning
    double energy = 0.0;
    double de_dlambda = 0.0;
};

// Linear least-squares solve for the rank-limited operator F minimizing the
// projected residual of (H_lambda - E) F |psi> + (V - dE/dlambda)|psi>.
// Minimum-norm solution via SVD with cutoff 1e-12 * sigma_max.
DlSolveReport dl_cse_lsq(const PerturbationSplit& split, const StateVector& psi, int rank);

// Same solve with V and V + c*Identity; the (V - dE/dlambda) combination makes
// the two reports agree.
std::pair<DlSolveReport, DlSolveReport> shift_invariance_check(const PerturbationSplit& split,
                                                               const StateVector& psi, int rank,
                                                               double c);

}  // namespace cse
