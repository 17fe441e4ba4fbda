#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cse/scf.hpp"

namespace cse {

// Occupation bitstring: bit p set means spin orbital p occupied.
using Det = std::uint64_t;

inline int det_sign_below(Det d, int p) {
    const Det mask = (Det{1} << p) - 1;
    return (__builtin_popcountll(d & mask) & 1) ? -1 : 1;
}

// Complete fixed-(N, Sz) sector, lexicographically ordered.
struct DeterminantBasis {
    int n_so = 0;
    int n_electrons = 0;
    double sz = 0.0;  // half-integer, alpha = even index = +1/2
    std::vector<Det> dets;
    std::unordered_map<Det, int> index;

    int size() const { return static_cast<int>(dets.size()); }
    int find(Det d) const {
        auto it = index.find(d);
        return it == index.end() ? -1 : it->second;
    }
};

DeterminantBasis enumerate_basis(int n_so, int n_electrons, double sz);

struct StateVector {
    const DeterminantBasis* basis = nullptr;
    Eigen::VectorXd c;

    static StateVector zero(const DeterminantBasis& b) {
        return {&b, Eigen::VectorXd::Zero(b.size())};
    }
    static StateVector unit(const DeterminantBasis& b, Det d);
};

// Ordered spin-orbital pairs (i<j) and the Sz-conserving quadruple list; the
// coefficient space of every two-body operator in the code.
struct PairTable {
    int n_so = 0;
    std::vector<std::pair<int, int>> pairs;  // (i, j) with i < j
    Eigen::MatrixXi pair_index;              // npair at (i,j), -1 elsewhere

    struct Quad {
        int ij, kl;        // ordered-pair indices: creation (i<j), annihilation (k<l)
        int i, j, k, l;
    };
    std::vector<Quad> quads;  // Sz-conserving only

    int n_pairs() const { return static_cast<int>(pairs.size()); }
    int n_quads() const { return static_cast<int>(quads.size()); }
};

const PairTable& pair_table(int n_so);  // cached per n_so

// Sz-conserving one-body index pairs (p, q) with equal spin parity.
std::vector<std::pair<int, int>> one_body_pairs(int n_so);

struct TwoBodyCoefficients {
    int rank = 2;
    int n_so = 0;
    Eigen::MatrixXd F;  // rank 2: n_pairs x n_pairs over ordered pairs; rank 1: n_so x n_so

    static TwoBodyCoefficients zero(int rank, int n_so);
};

// a^+_i a^+_j a_l a_k applied right to left; nullopt when a bit is
// annihilated twice or created on an occupied orbital.
std::optional<std::pair<Det, int>> apply_pair_string(Det d, int i, int j, int l, int k);

// a^+_p a_q with sign.
std::optional<std::pair<Det, int>> apply_one_body_string(Det d, int p, int q);

StateVector apply_two_body(const TwoBodyCoefficients& F, const StateVector& psi);

// F^T: the adjoint of the real operator (creation/annihilation pairs swapped).
StateVector apply_two_body_transpose(const TwoBodyCoefficients& F, const StateVector& psi);

StateVector apply_hamiltonian(const SpinOrbitalHamiltonian& H, const StateVector& psi);

double s_squared_expectation(const StateVector& psi);
int multiplicity(const StateVector& psi);

namespace kernels {

// c[m] = <x| a^+_i a^+_j a_l a_k |y> for every Sz-conserving ordered quadruple m.
// OpenMP over source determinants; serial variant kept as the test reference.
Eigen::VectorXd contract_pairs(const StateVector& x, const StateVector& y);
Eigen::VectorXd contract_pairs_serial(const StateVector& x, const StateVector& y);

// c[m] = <x| a^+_p a_q |y> over Sz-conserving one-body pairs m.
Eigen::VectorXd contract_one_body(const StateVector& x, const StateVector& y);

// Dense sector matrix of H including the e_nuc shift.
Eigen::MatrixXd dense_hamiltonian(const SpinOrbitalHamiltonian& H, const DeterminantBasis& basis);
Eigen::MatrixXd dense_hamiltonian_serial(const SpinOrbitalHamiltonian& H,
                                         const DeterminantBasis& basis);

}  // namespace kernels

}  // namespace cse
