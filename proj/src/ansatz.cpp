#include "cse/ansatz.hpp"

#include <cmath>
#include <stdexcept>

namespace cse {

namespace {

TwoBodyCoefficients coeffs_from_quads(int n_so, const Eigen::VectorXd& x) {
    const PairTable& pt = pair_table(n_so);
    TwoBodyCoefficients F = TwoBodyCoefficients::zero(2, n_so);
    for (int m = 0; m < pt.n_quads(); ++m) F.F(pt.quads[m].ij, pt.quads[m].kl) = x[m];
    return F;
}

StateVector apply_exponential(const TwoBodyCoefficients& F, const StateVector& u) {
    StateVector sum = u;
    StateVector term = u;
    for (int n = 1; n <= 60; ++n) {
        term = apply_two_body(F, term);
        term.c /= n;
        sum.c += term.c;
        if (term.c.norm() < 1e-14 * sum.c.norm()) return sum;
    }
    throw std::runtime_error("exponential layer series did not converge in 60 terms");
}

StateVector apply_layer(const TwoBodyCoefficients& F, const StateVector& u, ExpansionForm form,
                        bool transpose) {
    TwoBodyCoefficients Ft = F;
    if (transpose) Ft.F = F.F.transpose();
    if (form == ExpansionForm::linear) {
        StateVector out = apply_two_body(Ft, u);
        out.c += u.c;
        return out;
    }
    return apply_exponential(Ft, u);
}

}  // namespace

ExpansionParams make_expansion(const DeterminantBasis& basis, Det reference, int n_layers,
                               ExpansionForm form) {
    if (n_layers < 1) throw std::domain_error("make_expansion: need at least one layer");
    if (basis.find(reference) < 0)
        throw std::domain_error("make_expansion: reference determinant not in sector");
    ExpansionParams p;
    p.form = form;
    p.reference = reference;
    p.basis = &basis;
    for (int k = 0; k < n_layers; ++k)
        p.layers.push_back(TwoBodyCoefficients::zero(2, basis.n_so));
    return p;
}

Eigen::VectorXd pack_params(const ExpansionParams& p) {
    const PairTable& pt = pair_table(p.basis->n_so);
    Eigen::VectorXd x(p.n_layers() * pt.n_quads());
    int o = 0;
    for (const auto& layer : p.layers)
        for (const auto& q : pt.quads) x[o++] = layer.F(q.ij, q.kl);
    return x;
}

void unpack_params(ExpansionParams& p, const Eigen::VectorXd& x) {
    const PairTable& pt = pair_table(p.basis->n_so);
    if (x.size() != p.n_layers() * pt.n_quads())
        throw std::domain_error("unpack_params: size mismatch");
    int o = 0;
    for (auto& layer : p.layers)
        for (const auto& q : pt.quads) layer.F(q.ij, q.kl) = x[o++];
}

StateVector build_state(const ExpansionParams& p) {
    StateVector u = StateVector::unit(*p.basis, p.reference);
    for (const auto& layer : p.layers) u = apply_layer(layer, u, p.form, false);
    return u;
}

std::pair<double, double> cse_objective(const SpinOrbitalHamiltonian& H,
                                        const ExpansionParams& p) {
    StateVector psi = build_state(p);
    const double n2 = psi.c.squaredNorm();
    if (n2 <= 0.0) throw std::runtime_error("cse_objective: zero-norm state");
    psi.c /= std::sqrt(n2);
    auto [E, R] = energy_and_residual(H, psi);
    return {R.frobenius_norm * R.frobenius_norm, E};
}

namespace {

// dJ/d(psi coefficients) for J = squared full-tensor Frobenius norm of the
// CSE residual of psi/|psi|, evaluated at the raw (unnormalized) psi.
Eigen::VectorXd objective_state_gradient(const SpinOrbitalHamiltonian& H, const StateVector& psi,
                                         double& J_out) {
    const DeterminantBasis& basis = *psi.basis;
    const double n2 = psi.c.squaredNorm();
    const StateVector Hpsi = apply_hamiltonian(H, psi);
    const double E = psi.c.dot(Hpsi.c) / n2;
    StateVector r = Hpsi;
    r.c -= E * psi.c;  // (H - E) psi
    StateVector phi = r;
    phi.c /= n2;
    const Eigen::VectorXd R = kernels::contract_pairs(psi, phi);
    const double J = 4.0 * R.squaredNorm();
    J_out = J;

    const TwoBodyCoefficients A = coeffs_from_quads(basis.n_so, 8.0 * R);
    const StateVector A_Hpsi = apply_two_body(A, Hpsi);
    const StateVector At_psi = apply_two_body_transpose(A, psi);
    const StateVector A_psi = apply_two_body(A, psi);
    const StateVector H_At_psi = apply_hamiltonian(H, At_psi);
    const double t = psi.c.dot(A_psi.c);

    Eigen::VectorXd g =
        A_Hpsi.c + H_At_psi.c - E * (A_psi.c + At_psi.c) - (2.0 * t / n2) * r.c;
    g /= n2;
    g -= (4.0 * J / n2) * psi.c;
    return g;
}

// dE/d(psi coefficients) for the Rayleigh quotient of the raw state.
Eigen::VectorXd energy_state_gradient(const SpinOrbitalHamiltonian& H, const StateVector& psi) {
    const double n2 = psi.c.squaredNorm();
    const StateVector Hpsi = apply_hamiltonian(H, psi);
    const double E = psi.c.dot(Hpsi.c) / n2;
    return (2.0 / n2) * (Hpsi.c - E * psi.c);
}

// Back-propagates a state-space gradient v through the layer product with
// forward states u[0..M]; returns the parameter gradient.
Eigen::VectorXd backprop_layers(const ExpansionParams& p, const std::vector<StateVector>& u,
                                StateVector v) {
    const PairTable& pt = pair_table(p.basis->n_so);
    const int M = p.n_layers();
    Eigen::VectorXd grad(M * pt.n_quads());
    for (int k = M - 1; k >= 0; --k) {
        Eigen::VectorXd gk;
        if (p.form == ExpansionForm::linear) {
            gk = kernels::contract_pairs(v, u[k]);
        } else {
            // d/dtheta <v| exp(F) |u> = sum_{a,b} <(F^T)^a v| T |F^b u> / (a+b+1)!
            std::vector<StateVector> va{v}, ub{u[k]};
            gk = Eigen::VectorXd::Zero(pt.n_quads());
            double fact = 1.0;  // (s+1)!
            for (int s = 0;; ++s) {
                fact *= (s + 1);
                Eigen::VectorXd term = Eigen::VectorXd::Zero(pt.n_quads());
                double bound = 0.0;
                for (int a = 0; a <= s; ++a) {
                    term += kernels::contract_pairs(va[a], ub[s - a]);
                    bound += va[a].c.norm() * ub[s - a].c.norm();
                }
                gk += term / fact;
                if (bound / fact < 1e-16 * (1.0 + gk.norm())) break;
                if (s >= 60) throw std::runtime_error("exponential gradient series diverged");
                va.push_back(apply_two_body_transpose(p.layers[k], va.back()));
                ub.push_back(apply_two_body(p.layers[k], ub.back()));
            }
        }
        grad.segment(k * pt.n_quads(), pt.n_quads()) = gk;
        if (k > 0) v = apply_layer(p.layers[k], v, p.form, true);
    }
    return grad;
}

std::vector<StateVector> forward_states(const ExpansionParams& p) {
    std::vector<StateVector> u;
    u.reserve(p.n_layers() + 1);
    u.push_back(StateVector::unit(*p.basis, p.reference));
    for (const auto& layer : p.layers) u.push_back(apply_layer(layer, u.back(), p.form, false));
    return u;
}

}  // namespace

Eigen::VectorXd cse_gradient(const SpinOrbitalHamiltonian& H, const ExpansionParams& p,
                             GradientMode mode, double fd_step) {
    if (mode == GradientMode::finite_difference) {
        ExpansionParams q = p;
        Eigen::VectorXd x = pack_params(p);
        Eigen::VectorXd g(x.size());
        for (int i = 0; i < x.size(); ++i) {
            const double x0 = x[i];
            x[i] = x0 + fd_step;
            unpack_params(q, x);
            const double fp = cse_objective(H, q).first;
            x[i] = x0 - fd_step;
            unpack_params(q, x);
            const double fm = cse_objective(H, q).first;
            x[i] = x0;
            g[i] = (fp - fm) / (2.0 * fd_step);
        }
        unpack_params(q, x);
        return g;
    }

    const std::vector<StateVector> u = forward_states(p);
    double J;
    Eigen::VectorXd gpsi = objective_state_gradient(H, u.back(), J);
    return backprop_layers(p, u, StateVector{p.basis, gpsi});
}

CseSolveResult solve_cse(const SpinOrbitalHamiltonian& H, const DeterminantBasis& basis,
                         Det reference, int n_layers, ExpansionForm form,
                         const OptimizerOptions& opts, unsigned seed,
                         int energy_stage_iterations, const Eigen::VectorXd* warm_start) {
    ExpansionParams p = make_expansion(basis, reference, n_layers, form);
    const PairTable& pt = pair_table(basis.n_so);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> init(-1e-3, 1e-3);
    Eigen::VectorXd x0(n_layers * pt.n_quads());
    for (int i = 0; i < x0.size(); ++i) x0[i] = init(rng);
    if (warm_start) {
        if (warm_start->size() != x0.size())
            throw std::domain_error("solve_cse: warm start size mismatch");
        x0 = *warm_start;
    }

    if (energy_stage_iterations > 0) {
        // Variational pre-stage: descend the Rayleigh quotient first so the
        // residual polish starts in the basin of the lowest reachable state
        // (the residual norm alone vanishes at every eigenstate and can
        // otherwise converge to an excited one at stretched geometries).
        auto energy_objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            unpack_params(p, x);
            const std::vector<StateVector> u = forward_states(p);
            g = backprop_layers(p, u, StateVector{p.basis, energy_state_gradient(H, u.back())});
            const StateVector& psi = u.back();
            return psi.c.dot(apply_hamiltonian(H, psi).c) / psi.c.squaredNorm();
        };
        OptimizerOptions stage = opts;
        stage.max_iterations = energy_stage_iterations;
        stage.gradient_tol = 1e-9;
        x0 = lbfgs_minimize(energy_objective, x0, stage).x;
    }

    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        unpack_params(p, x);
        const double value = cse_objective(H, p).first;
        g = cse_gradient(H, p,
                         opts.finite_difference ? GradientMode::finite_difference
                                                : GradientMode::analytic_adjoint,
                         opts.fd_step);
        return value;
    };
    OptimizeReport rep = lbfgs_minimize(objective, x0, opts);

    CseSolveResult res;
    unpack_params(p, rep.x);
    res.params = p;
    res.state = build_state(p);
    res.state.c.normalize();
    res.energy = res.state.c.dot(apply_hamiltonian(H, res.state).c);
    res.residual_norm = std::sqrt(std::max(0.0, rep.fx));
    res.gradient_norm = rep.gradient_norm;
    res.iterations = rep.iterations;
    res.converged = rep.converged;
    res.message = rep.message;
    return res;
}

std::vector<ExcitedStateResult> solve_cse_excited(const SpinOrbitalHamiltonian& H,
                                                  const DeterminantBasis& basis,
                                                  const Spectrum& spectrum, int n_targets,
                                                  int n_layers, const OptimizerOptions& opts,
                                                  unsigned seed) {
    if (static_cast<int>(spectrum.eigenvalues.size()) < n_targets + 1)
        throw std::domain_error("solve_cse_excited: spectrum too short to label targets");
    const PairTable& pt = pair_table(basis.n_so);

    std::vector<ExcitedStateResult> found;
    for (int k = 1; k <= n_targets; ++k) {
        const StateVector& target = spectrum.eigenvectors[k];
        // reference = the target's dominant determinant
        int dom = 0;
        for (int d = 1; d < basis.size(); ++d)
            if (std::abs(target.c[d]) > std::abs(target.c[dom])) dom = d;
        const Det ref = basis.dets[dom];

        // Warm start: fit the first layer so (1 + F)|ref> tracks the target
        // (residual minimization alone funnels most references into a few
        // low-lying basins; the fitted start keeps each run on its own state).
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(basis.size(), pt.n_quads());
        for (int m = 0; m < pt.n_quads(); ++m) {
            const auto& q = pt.quads[m];
            if (auto r = apply_pair_string(ref, q.i, q.j, q.l, q.k)) {
                const int t = basis.find(r->first);
                if (t >= 0) A(t, m) += r->second;
            }
        }
        Eigen::VectorXd rhs = target.c / target.c[dom];
        rhs[dom] -= 1.0;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        Eigen::VectorXd warm = Eigen::VectorXd::Zero(n_layers * pt.n_quads());
        warm.head(pt.n_quads()) = svd.solve(rhs);

        CseSolveResult run = solve_cse(H, basis, ref, n_layers, ExpansionForm::linear, opts,
                                       seed + static_cast<unsigned>(k), 0, &warm);
        int best = -1;
        double best_ov = 0.0;
        for (std::size_t s = 0; s < spectrum.eigenvectors.size(); ++s) {
            const double ov = std::abs(run.state.c.dot(spectrum.eigenvectors[s].c));
            if (ov > best_ov) {
                best_ov = ov;
                best = static_cast<int>(s);
            }
        }
        if (best != k || best_ov < 0.5) continue;  // drifted off target: discard
        ExcitedStateResult r;
        r.fci_state = k;
        r.energy = run.energy;
        r.energy_error = run.energy - spectrum.eigenvalues[k];
        r.overlap = best_ov;
        r.multiplicity = multiplicity(run.state);
        r.reference = ref;
        r.solve = std::move(run);
        found.push_back(std::move(r));
    }
    return found;
}

}  // namespace cse
