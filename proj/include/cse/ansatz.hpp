#pragma once

#include <random>

#include "cse/dl.hpp"
#include "cse/fci.hpp"
#include "cse/fockspace.hpp"
#include "cse/lbfgs.hpp"

namespace cse {

enum class ExpansionForm { linear, exponential };

// Product of M two-body layers acting on a reference determinant:
// linear form Prod (1 + F_k), exponential form Prod exp(F_k).
struct ExpansionParams {
    ExpansionForm form = ExpansionForm::linear;
    std::vector<TwoBodyCoefficients> layers;
    Det reference = 0;
    const DeterminantBasis* basis = nullptr;

    int n_layers() const { return static_cast<int>(layers.size()); }
};

ExpansionParams make_expansion(const DeterminantBasis& basis, Det reference, int n_layers,
                               ExpansionForm form);

// Flat parameter vector: Sz-conserving ordered quadruples per layer, layers
// concatenated.
Eigen::VectorXd pack_params(const ExpansionParams& p);
void unpack_params(ExpansionParams& p, const Eigen::VectorXd& x);

StateVector build_state(const ExpansionParams& p);

// value = squared full-tensor Frobenius norm of the CSE residual of the
// normalized state; energy = Rayleigh quotient.
std::pair<double, double> cse_objective(const SpinOrbitalHamiltonian& H,
                                        const ExpansionParams& p);

enum class GradientMode { analytic_adjoint, finite_difference };

Eigen::VectorXd cse_gradient(const SpinOrbitalHamiltonian& H, const ExpansionParams& p,
                             GradientMode mode = GradientMode::analytic_adjoint,
                             double fd_step = 1e-5);

struct CseSolveResult {
    double energy = 0.0;
    double residual_norm = 0.0;  // Frobenius norm at exit
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
    ExpansionParams params;
    StateVector state;  // normalized
};

// energy_stage_iterations > 0 prepends a variational descent of the Rayleigh
// quotient before the residual minimization, steering ground-state solves away
// from the excited eigenstates that also zero the residual. A warm start
// replaces the small random initialization (continuation between geometries,
// or a fitted first layer for excited-state targeting).
CseSolveResult solve_cse(const SpinOrbitalHamiltonian& H, const DeterminantBasis& basis,
                         Det reference, int n_layers, ExpansionForm form,
                         const OptimizerOptions& opts, unsigned seed,
                         int energy_stage_iterations = 0,
                         const Eigen::VectorXd* warm_start = nullptr);

// Pre-stage budget used by the ground-state pipelines.
inline constexpr int kGroundStateEnergyStage = 400;

struct ExcitedStateResult {
    int fci_state = -1;  // index into the spectrum this run converged to
    double energy = 0.0;
    double energy_error = 0.0;
    double overlap = 0.0;  // |<psi | fci>|
    int multiplicity = 0;
    Det reference = 0;
    CseSolveResult solve;
};

// Enumerates reference determinants by diagonal energy and keeps the first
// converged run for each of the FCI states 1..n_targets; a run whose FCI
// overlap does not identify a fresh state is discarded, not accepted.
std::vector<ExcitedStateResult> solve_cse_excited(const SpinOrbitalHamiltonian& H,
                                                  const DeterminantBasis& basis,
                                                  const Spectrum& spectrum, int n_targets,
                                                  int n_layers, const OptimizerOptions& opts,
                                                  unsigned seed);

}  // namespace cse
