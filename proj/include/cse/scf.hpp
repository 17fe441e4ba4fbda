#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cse/basis.hpp"

namespace cse {

struct ScfOptions {
    int max_iterations = 200;
    double energy_tol = 1e-10;
    double density_tol = 1e-8;
    double damping = 0.5;  // applied for the first damped_iterations cycles
    int damped_iterations = 5;
};

struct ScfResult {
    Eigen::MatrixXd mo_coefficients;   // columns are MOs, C^T S C = I
    Eigen::VectorXd orbital_energies;  // ascending
    double e_hf = 0.0;
    bool converged = false;
    int n_iterations = 0;
    bool has_energy = true;  // false for the Loewdin orbital set
};

// Spin orbitals interleaved (alpha, beta, alpha, beta, ...); spin = index
// parity. g is the antisymmetrized physicist-convention tensor <pq||rs>.
struct SpinOrbitalHamiltonian {
    int n_so = 0;
    Eigen::MatrixXd h;
    std::vector<double> g;
    double e_nuc = 0.0;

    double& g_at(int p, int q, int r, int s) {
        return g[((p * n_so + q) * std::size_t(n_so) + r) * n_so + s];
    }
    double g_at(int p, int q, int r, int s) const {
        return g[((p * n_so + q) * std::size_t(n_so) + r) * n_so + s];
    }
};

ScfResult rhf_solve(const IntegralSet& ints, int n_electrons, const ScfOptions& opts = {});

// Symmetric orthogonalization ordered by the diagonal core Hamiltonian;
// orbital choice for sectors where no closed-shell reference exists.
ScfResult orthonormal_orbitals_open_shell(const IntegralSet& ints);

SpinOrbitalHamiltonian mo_transform(const IntegralSet& ints, const Eigen::MatrixXd& C);

double mp2_energy(const SpinOrbitalHamiltonian& H, const ScfResult& scf, int n_electrons);

}  // namespace cse
