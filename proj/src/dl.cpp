#include "cse/dl.hpp"

#include <cmath>
#include <stdexcept>

namespace cse {

namespace {

double rayleigh(const SpinOrbitalHamiltonian& H, const StateVector& psi, double& norm2) {
    norm2 = psi.c.squaredNorm();
    if (norm2 <= 0.0) throw std::domain_error("zero state vector");
    return psi.c.dot(apply_hamiltonian(H, psi).c) / norm2;
}

}  // namespace

SpinOrbitalHamiltonian PerturbationSplit::assemble() const {
    SpinOrbitalHamiltonian H = h0;
    H.h += lambda * v.h;
    for (std::size_t i = 0; i < H.g.size(); ++i) H.g[i] += lambda * v.g[i];
    H.e_nuc += lambda * v.e_nuc;
    return H;
}

ResidualTensor expand_residual(int n_so, const Eigen::VectorXd& ordered) {
    const PairTable& pt = pair_table(n_so);
    ResidualTensor R;
    R.n_so = n_so;
    R.r.assign(static_cast<std::size_t>(n_so) * n_so * n_so * n_so, 0.0);
    auto set = [&](int i, int j, int k, int l, double v) {
        R.r[((i * n_so + j) * std::size_t(n_so) + k) * n_so + l] = v;
    };
    for (int m = 0; m < pt.n_quads(); ++m) {
        const auto& q = pt.quads[m];
        const double v = ordered[m];
        set(q.i, q.j, q.k, q.l, v);
        set(q.j, q.i, q.k, q.l, -v);
        set(q.i, q.j, q.l, q.k, -v);
        set(q.j, q.i, q.l, q.k, v);
    }
    // full-tensor Frobenius: each ordered value appears four times
    R.frobenius_norm = 2.0 * ordered.norm();
    return R;
}

std::pair<double, ResidualTensor> energy_and_residual(const SpinOrbitalHamiltonian& H,
                                                      const StateVector& psi) {
    double n2;
    const double E = rayleigh(H, psi, n2);
    StateVector phi = apply_hamiltonian(H, psi);
    phi.c = (phi.c - E * psi.c) / n2;
    const Eigen::VectorXd ordered = kernels::contract_pairs(psi, phi);
    return {E, expand_residual(H.n_so, ordered)};
}

double dispersion(const SpinOrbitalHamiltonian& H, const StateVector& psi) {
    double n2;
    const double E = rayleigh(H, psi, n2);
    StateVector r = apply_hamiltonian(H, psi);
    r.c -= E * psi.c;
    return r.c.squaredNorm() / n2;
}

DlSolveReport dl_cse_lsq(const PerturbationSplit& split, const StateVector& psi, int rank) {
    if (rank != 1 && rank != 2) throw std::domain_error("dl_cse_lsq: rank must be 1 or 2");
    const DeterminantBasis& basis = *psi.basis;
    const int n_so = basis.n_so;
    const SpinOrbitalHamiltonian Hl = split.lambda == 0.0 ? split.h0 : split.assemble();

    StateVector p = psi;
    p.c.normalize();
    double n2;
    const double E = rayleigh(Hl, p, n2);

    StateVector vpsi = apply_hamiltonian(split.v, p);
    const double dedl = p.c.dot(vpsi.c);
    StateVector rhs_state = vpsi;
    rhs_state.c -= dedl * p.c;  // (V - dE/dlambda)|psi>

    const PairTable& pt = pair_table(n_so);
    const int n_rows = pt.n_quads();
    const Eigen::VectorXd b = kernels::contract_pairs(p, rhs_state);

    auto column_state = [&](int m) {
        // (H - E) applied to the m-th unit-coefficient operator acting on psi
        StateVector fpsi = StateVector::zero(basis);
        if (rank == 2) {
            const auto& q = pt.quads[m];
            for (int d = 0; d < basis.size(); ++d) {
                if (p.c[d] == 0.0) continue;
                if (auto r = apply_pair_string(basis.dets[d], q.i, q.j, q.l, q.k)) {
                    const int t = basis.find(r->first);
                    if (t >= 0) fpsi.c[t] += r->second * p.c[d];
                }
            }
        } else {
            const auto pairs = one_body_pairs(n_so);
            for (int d = 0; d < basis.size(); ++d) {
                if (p.c[d] == 0.0) continue;
                if (auto r = apply_one_body_string(basis.dets[d], pairs[m].first, pairs[m].second)) {
                    const int t = basis.find(r->first);
                    if (t >= 0) fpsi.c[t] += r->second * p.c[d];
                }
            }
        }
        StateVector out = apply_hamiltonian(Hl, fpsi);
        out.c -= E * fpsi.c;
        return out;
    };

    const int n_params = rank == 2 ? pt.n_quads() : static_cast<int>(one_body_pairs(n_so).size());
    Eigen::MatrixXd A(n_rows, n_params);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < n_params; ++m) {
        const StateVector y = column_state(m);
        A.col(m) = kernels::contract_pairs_serial(p, y);
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    const Eigen::VectorXd f = svd.solve(-b);

    DlSolveReport rep;
    rep.rank = rank;
    rep.energy = E;
    rep.de_dlambda = dedl;
    rep.sigma_max = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    rep.sigma_min = svd.singularValues().size()
                        ? svd.singularValues()[svd.singularValues().size() - 1]
                        : 0.0;
    rep.dl_cse_error = 2.0 * (A * f + b).norm();  // full-tensor Frobenius convention

    rep.F = TwoBodyCoefficients::zero(rank, n_so);
    if (rank == 2) {
        for (int m = 0; m < n_params; ++m) rep.F.F(pt.quads[m].ij, pt.quads[m].kl) = f[m];
    } else {
        const auto pairs = one_body_pairs(n_so);
        for (int m = 0; m < n_params; ++m) rep.F.F(pairs[m].first, pairs[m].second) = f[m];
    }

    StateVector fpsi = apply_two_body(rep.F, p);
    StateVector full = apply_hamiltonian(Hl, fpsi);
    full.c -= E * fpsi.c;
    full.c += rhs_state.c;
    rep.dl_error = full.c.norm();
    return rep;
}

std::pair<DlSolveReport, DlSolveReport> shift_invariance_check(const PerturbationSplit& split,
                                                               const StateVector& psi, int rank,
                                                               double c) {
    DlSolveReport a = dl_cse_lsq(split, psi, rank);
    PerturbationSplit shifted = split;
    shifted.v.e_nuc += c;  // the identity operator is a constant on the sector
    DlSolveReport b = dl_cse_lsq(shifted, psi, rank);
    return {a, b};
}

}  // namespace cse
