#include "cse/fockspace.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cse {

namespace {

bool annihilate(Det& d, int p, int& sign) {
    if (!((d >> p) & 1)) return false;
    sign *= det_sign_below(d, p);
    d &= ~(Det{1} << p);
    return true;
}

bool create(Det& d, int p, int& sign) {
    if ((d >> p) & 1) return false;
    sign *= det_sign_below(d, p);
    d |= Det{1} << p;
    return true;
}

double sz_of(Det d, int n_so) {
    double sz = 0.0;
    for (int p = 0; p < n_so; ++p)
        if ((d >> p) & 1) sz += (p & 1) ? -0.5 : 0.5;
    return sz;
}

}  // namespace

DeterminantBasis enumerate_basis(int n_so, int n_electrons, double sz) {
    if (n_electrons < 0 || n_electrons > n_so)
        throw std::domain_error("enumerate_basis: electron count out of range");
    // Sz must have the parity of the electron count: N/2 - n_beta
    const double two_sz = 2.0 * sz;
    if (std::abs(two_sz - std::round(two_sz)) > 1e-12 ||
        (static_cast<long>(std::llround(two_sz)) + n_electrons) % 2 != 0)
        throw std::domain_error("enumerate_basis: sz inconsistent with electron count");

    DeterminantBasis b;
    b.n_so = n_so;
    b.n_electrons = n_electrons;
    b.sz = sz;
    for (Det d = 0; d < (Det{1} << n_so); ++d) {
        if (__builtin_popcountll(d) != n_electrons) continue;
        if (std::abs(sz_of(d, n_so) - sz) > 1e-12) continue;
        b.index.emplace(d, static_cast<int>(b.dets.size()));
        b.dets.push_back(d);
    }
    if (b.dets.empty()) throw std::domain_error("enumerate_basis: empty sector");
    return b;
}

StateVector StateVector::unit(const DeterminantBasis& b, Det d) {
    StateVector v = zero(b);
    const int i = b.find(d);
    if (i < 0) throw std::domain_error("StateVector::unit: determinant not in sector");
    v.c[i] = 1.0;
    return v;
}

const PairTable& pair_table(int n_so) {
    static std::map<int, PairTable> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n_so);
    if (it != cache.end()) return it->second;

    PairTable t;
    t.n_so = n_so;
    t.pair_index = Eigen::MatrixXi::Constant(n_so, n_so, -1);
    for (int i = 0; i < n_so; ++i)
        for (int j = i + 1; j < n_so; ++j) {
            t.pair_index(i, j) = static_cast<int>(t.pairs.size());
            t.pairs.emplace_back(i, j);
        }
    auto pair_sz = [](const std::pair<int, int>& p) {
        return ((p.first & 1) ? -1 : 1) + ((p.second & 1) ? -1 : 1);
    };
    for (int ij = 0; ij < t.n_pairs(); ++ij)
        for (int kl = 0; kl < t.n_pairs(); ++kl)
            if (pair_sz(t.pairs[ij]) == pair_sz(t.pairs[kl]))
                t.quads.push_back({ij, kl, t.pairs[ij].first, t.pairs[ij].second,
                                   t.pairs[kl].first, t.pairs[kl].second});
    return cache.emplace(n_so, std::move(t)).first->second;
}

std::vector<std::pair<int, int>> one_body_pairs(int n_so) {
    std::vector<std::pair<int, int>> out;
    for (int p = 0; p < n_so; ++p)
        for (int q = 0; q < n_so; ++q)
            if ((p & 1) == (q & 1)) out.emplace_back(p, q);
    return out;
}

TwoBodyCoefficients TwoBodyCoefficients::zero(int rank, int n_so) {
    TwoBodyCoefficients F;
    F.rank = rank;
    F.n_so = n_so;
    if (rank == 2) {
        const int np = pair_table(n_so).n_pairs();
        F.F = Eigen::MatrixXd::Zero(np, np);
    } else if (rank == 1) {
        F.F = Eigen::MatrixXd::Zero(n_so, n_so);
    } else {
        throw std::domain_error("TwoBodyCoefficients: rank must be 1 or 2");
    }
    return F;
}

std::optional<std::pair<Det, int>> apply_pair_string(Det d, int i, int j, int l, int k) {
    int sign = 1;
    if (!annihilate(d, k, sign)) return std::nullopt;
    if (!annihilate(d, l, sign)) return std::nullopt;
    if (!create(d, j, sign)) return std::nullopt;
    if (!create(d, i, sign)) return std::nullopt;
    return std::make_pair(d, sign);
}

std::optional<std::pair<Det, int>> apply_one_body_string(Det d, int p, int q) {
    int sign = 1;
    if (!annihilate(d, q, sign)) return std::nullopt;
    if (!create(d, p, sign)) return std::nullopt;
    return std::make_pair(d, sign);
}

StateVector apply_two_body(const TwoBodyCoefficients& F, const StateVector& psi) {
    const DeterminantBasis& b = *psi.basis;
    if (F.n_so != b.n_so) throw std::domain_error("apply_two_body: dimension mismatch");
    StateVector out = StateVector::zero(b);
    if (F.rank == 1) {
        for (int d = 0; d < b.size(); ++d) {
            const double cd = psi.c[d];
            if (cd == 0.0) continue;
            for (int p = 0; p < b.n_so; ++p)
                for (int q = 0; q < b.n_so; ++q) {
                    if (F.F(p, q) == 0.0) continue;
                    if (auto r = apply_one_body_string(b.dets[d], p, q)) {
                        const int t = b.find(r->first);
                        if (t >= 0) out.c[t] += F.F(p, q) * r->second * cd;
                    }
                }
        }
        return out;
    }
    const PairTable& pt = pair_table(b.n_so);
    for (int d = 0; d < b.size(); ++d) {
        const double cd = psi.c[d];
        if (cd == 0.0) continue;
        for (const auto& q : pt.quads) {
            const double f = F.F(q.ij, q.kl);
            if (f == 0.0) continue;
            if (auto r = apply_pair_string(b.dets[d], q.i, q.j, q.l, q.k)) {
                const int t = b.find(r->first);
                if (t >= 0) out.c[t] += f * r->second * cd;
            }
        }
    }
    return out;
}

StateVector apply_two_body_transpose(const TwoBodyCoefficients& F, const StateVector& psi) {
    TwoBodyCoefficients Ft = F;
    Ft.F = F.F.transpose();
    return apply_two_body(Ft, psi);
}

StateVector apply_hamiltonian(const SpinOrbitalHamiltonian& H, const StateVector& psi) {
    const DeterminantBasis& b = *psi.basis;
    if (H.n_so != b.n_so) throw std::domain_error("apply_hamiltonian: dimension mismatch");
    StateVector out = StateVector::zero(b);
    for (int d = 0; d < b.size(); ++d) {
        const double cd = psi.c[d];
        if (cd == 0.0) continue;
        const Det det = b.dets[d];
        out.c[d] += H.e_nuc * cd;
        for (int q = 0; q < b.n_so; ++q) {
            if (!((det >> q) & 1)) continue;
            for (int p = 0; p < b.n_so; ++p) {
                if (H.h(p, q) == 0.0) continue;
                if (auto r = apply_one_body_string(det, p, q)) {
                    const int t = b.find(r->first);
                    if (t >= 0) out.c[t] += H.h(p, q) * r->second * cd;
                }
            }
        }
        // 1/4 sum over all pqrs of antisymmetrized g collapses to ordered pairs
        for (int r1 = 0; r1 < b.n_so; ++r1) {
            if (!((det >> r1) & 1)) continue;
            for (int s1 = r1 + 1; s1 < b.n_so; ++s1) {
                if (!((det >> s1) & 1)) continue;
                for (int p = 0; p < b.n_so; ++p)
                    for (int q2 = p + 1; q2 < b.n_so; ++q2) {
                        const double g = H.g_at(p, q2, r1, s1);
                        if (g == 0.0) continue;
                        if (auto r = apply_pair_string(det, p, q2, s1, r1)) {
                            const int t = b.find(r->first);
                            if (t >= 0) out.c[t] += g * r->second * cd;
                        }
                    }
            }
        }
    }
    return out;
}

double s_squared_expectation(const StateVector& psi) {
    const DeterminantBasis& b = *psi.basis;
    // <S^2> = |S+ psi|^2 + Sz(Sz+1); S+ = sum_P a^+_{P,alpha} a_{P,beta}
    std::unordered_map<Det, double> raised;
    for (int d = 0; d < b.size(); ++d) {
        const double cd = psi.c[d];
        if (cd == 0.0) continue;
        for (int P = 0; P < b.n_so / 2; ++P) {
            if (auto r = apply_one_body_string(b.dets[d], 2 * P, 2 * P + 1))
                raised[r->first] += r->second * cd;
        }
    }
    double nrm2 = 0.0;
    for (const auto& [det, v] : raised) nrm2 += v * v;
    return nrm2 + b.sz * (b.sz + 1.0);
}

int multiplicity(const StateVector& psi) {
    return static_cast<int>(std::lround(std::sqrt(1.0 + 4.0 * s_squared_expectation(psi))));
}

namespace kernels {

Eigen::VectorXd contract_pairs_serial(const StateVector& x, const StateVector& y) {
    const DeterminantBasis& b = *x.basis;
    const PairTable& pt = pair_table(b.n_so);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(pt.n_quads());
    for (int d = 0; d < b.size(); ++d) {
        const double yd = y.c[d];
        if (yd == 0.0) continue;
        for (int m = 0; m < pt.n_quads(); ++m) {
            const auto& q = pt.quads[m];
            if (auto r = apply_pair_string(b.dets[d], q.i, q.j, q.l, q.k)) {
                const int t = b.find(r->first);
                if (t >= 0) c[m] += x.c[t] * r->second * yd;
            }
        }
    }
    return c;
}

Eigen::VectorXd contract_pairs(const StateVector& x, const StateVector& y) {
    const DeterminantBasis& b = *x.basis;
    const PairTable& pt = pair_table(b.n_so);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(pt.n_quads());
#pragma omp parallel
    {
        Eigen::VectorXd local = Eigen::VectorXd::Zero(pt.n_quads());
#pragma omp for schedule(static) nowait
        for (int d = 0; d < b.size(); ++d) {
            const double yd = y.c[d];
            if (yd == 0.0) continue;
            for (int m = 0; m < pt.n_quads(); ++m) {
                const auto& q = pt.quads[m];
                if (auto r = apply_pair_string(b.dets[d], q.i, q.j, q.l, q.k)) {
                    const int t = b.find(r->first);
                    if (t >= 0) local[m] += x.c[t] * r->second * yd;
                }
            }
        }
#pragma omp critical
        c += local;
    }
    return c;
}

Eigen::VectorXd contract_one_body(const StateVector& x, const StateVector& y) {
    const DeterminantBasis& b = *x.basis;
    const auto pairs = one_body_pairs(b.n_so);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<int>(pairs.size()));
    for (int d = 0; d < b.size(); ++d) {
        const double yd = y.c[d];
        if (yd == 0.0) continue;
        for (std::size_t m = 0; m < pairs.size(); ++m) {
            if (auto r = apply_one_body_string(b.dets[d], pairs[m].first, pairs[m].second)) {
                const int t = b.find(r->first);
                if (t >= 0) c[static_cast<int>(m)] += x.c[t] * r->second * yd;
            }
        }
    }
    return c;
}

Eigen::MatrixXd dense_hamiltonian_serial(const SpinOrbitalHamiltonian& H,
                                         const DeterminantBasis& basis) {
    const int dim = basis.size();
    Eigen::MatrixXd M(dim, dim);
    for (int col = 0; col < dim; ++col) {
        StateVector u = StateVector::zero(basis);
        u.c[col] = 1.0;
        M.col(col) = apply_hamiltonian(H, u).c;
    }
    return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd dense_hamiltonian(const SpinOrbitalHamiltonian& H,
                                  const DeterminantBasis& basis) {
    const int dim = basis.size();
    Eigen::MatrixXd M(dim, dim);
#pragma omp parallel for schedule(dynamic)
    for (int col = 0; col < dim; ++col) {
        StateVector u = StateVector::zero(basis);
        u.c[col] = 1.0;
        M.col(col) = apply_hamiltonian(H, u).c;
    }
    return 0.5 * (M + M.transpose());
}

}  // namespace kernels

}  // namespace cse
