#include "cse/scf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cse {

namespace {

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

Eigen::MatrixXd fock_matrix(const IntegralSet& ints, const Eigen::MatrixXd& D) {
    const int n = ints.n_ao;
    Eigen::MatrixXd F = ints.T + ints.Vne;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double g = 0.0;
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    g += D(r, s) * (ints.eri_at(p, q, r, s) - 0.5 * ints.eri_at(p, s, r, q));
            F(p, q) += g;
        }
    return F;
}

}  // namespace

ScfResult rhf_solve(const IntegralSet& ints, int n_electrons, const ScfOptions& opts) {
    if (n_electrons % 2 != 0) throw std::domain_error("rhf_solve: odd electron count");
    if (n_electrons > 2 * ints.n_ao) throw std::domain_error("rhf_solve: too many electrons");
    const int n = ints.n_ao;
    const int nocc = n_electrons / 2;
    const Eigen::MatrixXd X = inverse_sqrt(ints.S);
    const Eigen::MatrixXd hcore = ints.T + ints.Vne;

    ScfResult res;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    double e_last = 0.0, delta_e = 0.0;
    std::vector<Eigen::MatrixXd> fock_hist, err_hist;
    constexpr int kDiisDepth = 8;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        Eigen::MatrixXd F = fock_matrix(ints, D);

        // Pulay DIIS: extrapolate the Fock matrix from the recent history,
        // weighting by the orbital-gradient residual FDS - SDF. The zero-
        // density starting iterate has a vanishing residual and must stay out
        // of the history.
        const Eigen::MatrixXd err =
            X.transpose() * (F * D * ints.S - ints.S * D * F) * X;
        if (iter > 1) {
            fock_hist.push_back(F);
            err_hist.push_back(err);
            if (static_cast<int>(fock_hist.size()) > kDiisDepth) {
                fock_hist.erase(fock_hist.begin());
                err_hist.erase(err_hist.begin());
            }
        }
        while (fock_hist.size() >= 2) {
            const int m = static_cast<int>(fock_hist.size());
            Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    B(i, j) = (err_hist[i].array() * err_hist[j].array()).sum();
            B.row(m).setConstant(-1.0);
            B.col(m).setConstant(-1.0);
            B(m, m) = 0.0;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
            rhs[m] = -1.0;
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
            if (lu.isInvertible()) {
                const Eigen::VectorXd c = lu.solve(rhs);
                F.setZero();
                for (int i = 0; i < m; ++i) F += c[i] * fock_hist[i];
                break;
            }
            fock_hist.erase(fock_hist.begin());  // shed the stale entry
            err_hist.erase(err_hist.begin());
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * F * X);
        Eigen::MatrixXd C = X * es.eigenvectors();
        Eigen::MatrixXd Dnew =
            2.0 * C.leftCols(nocc) * C.leftCols(nocc).transpose();
        if (iter <= opts.damped_iterations)
            Dnew = opts.damping * D + (1.0 - opts.damping) * Dnew;

        const double e_el = 0.5 * (Dnew.array() * (hcore + fock_matrix(ints, Dnew)).array()).sum();
        const double e_tot = e_el + ints.e_nuc;
        delta_e = e_tot - e_last;
        const double delta_d = (Dnew - D).norm() / n;
        D = Dnew;
        res.mo_coefficients = C;
        res.orbital_energies = es.eigenvalues();
        res.e_hf = e_tot;
        res.n_iterations = iter;
        if (iter > 1 && std::abs(delta_e) < opts.energy_tol && delta_d < opts.density_tol) {
            res.converged = true;
            break;
        }
        e_last = e_tot;
    }
    if (!res.converged)
        throw std::runtime_error("rhf_solve: no convergence after " +
                                 std::to_string(opts.max_iterations) +
                                 " iterations; last energy delta " + std::to_string(delta_e));
    return res;
}

ScfResult orthonormal_orbitals_open_shell(const IntegralSet& ints) {
    const Eigen::MatrixXd X = inverse_sqrt(ints.S);
    const Eigen::MatrixXd hcore = ints.T + ints.Vne;
    const Eigen::VectorXd diag = (X.transpose() * hcore * X).diagonal();

    std::vector<int> order(ints.n_ao);
    for (int i = 0; i < ints.n_ao; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });

    ScfResult res;
    res.mo_coefficients.resize(ints.n_ao, ints.n_ao);
    res.orbital_energies.resize(ints.n_ao);
    for (int i = 0; i < ints.n_ao; ++i) {
        res.mo_coefficients.col(i) = X.col(order[i]);
        res.orbital_energies[i] = diag[order[i]];
    }
    res.converged = true;
    res.has_energy = false;
    return res;
}

SpinOrbitalHamiltonian mo_transform(const IntegralSet& ints, const Eigen::MatrixXd& C) {
    const int n = ints.n_ao;
    const Eigen::MatrixXd h_mo = C.transpose() * (ints.T + ints.Vne) * C;

    // staged O(n^5) four-index transform, chemist convention throughout
    auto idx = [n](int p, int q, int r, int s) {
        return ((p * n + q) * std::size_t(n) + r) * n + s;
    };
    std::vector<double> t1(ints.eri.size(), 0.0), t2(ints.eri.size(), 0.0);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    for (int m = 0; m < n; ++m)
                        t1[idx(p, q, r, s)] += C(m, p) * ints.eri[idx(m, q, r, s)];
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    for (int m = 0; m < n; ++m)
                        t2[idx(p, q, r, s)] += C(m, q) * t1[idx(p, m, r, s)];
    std::fill(t1.begin(), t1.end(), 0.0);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    for (int m = 0; m < n; ++m)
                        t1[idx(p, q, r, s)] += C(m, r) * t2[idx(p, q, m, s)];
    std::fill(t2.begin(), t2.end(), 0.0);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    for (int m = 0; m < n; ++m)
                        t2[idx(p, q, r, s)] += C(m, s) * t1[idx(p, q, r, m)];
    const std::vector<double>& mo = t2;  // (pq|rs) in MOs

    SpinOrbitalHamiltonian H;
    H.n_so = 2 * n;
    H.e_nuc = ints.e_nuc;
    H.h = Eigen::MatrixXd::Zero(H.n_so, H.n_so);
    H.g.assign(static_cast<std::size_t>(H.n_so) * H.n_so * H.n_so * H.n_so, 0.0);
    for (int p = 0; p < H.n_so; ++p)
        for (int q = 0; q < H.n_so; ++q)
            if ((p & 1) == (q & 1)) H.h(p, q) = h_mo(p / 2, q / 2);
    for (int p = 0; p < H.n_so; ++p)
        for (int q = 0; q < H.n_so; ++q)
            for (int r = 0; r < H.n_so; ++r)
                for (int s = 0; s < H.n_so; ++s) {
                    // <pq|rs> = (PR|QS) with matching spins
                    double direct = 0.0, exchange = 0.0;
                    if ((p & 1) == (r & 1) && (q & 1) == (s & 1))
                        direct = mo[idx(p / 2, r / 2, q / 2, s / 2)];
                    if ((p & 1) == (s & 1) && (q & 1) == (r & 1))
                        exchange = mo[idx(p / 2, s / 2, q / 2, r / 2)];
                    H.g_at(p, q, r, s) = direct - exchange;
                }
    return H;
}

double mp2_energy(const SpinOrbitalHamiltonian& H, const ScfResult& scf, int n_electrons) {
    const int n_so = H.n_so;
    auto eps = [&](int p) { return scf.orbital_energies[p / 2]; };
    double e2 = 0.0;
    for (int i = 0; i < n_electrons; ++i)
        for (int j = 0; j < n_electrons; ++j)
            for (int a = n_electrons; a < n_so; ++a)
                for (int b = n_electrons; b < n_so; ++b) {
                    const double denom = eps(i) + eps(j) - eps(a) - eps(b);
                    const double num = H.g_at(i, j, a, b);
                    if (num != 0.0 && std::abs(denom) < 1e-8)
                        throw std::runtime_error("mp2_energy: degenerate occupied/virtual gap");
                    if (num != 0.0) e2 += 0.25 * num * num / denom;
                }
    return e2;
}

}  // namespace cse
