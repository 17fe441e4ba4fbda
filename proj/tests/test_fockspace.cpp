#include <doctest.h>

#include <random>

#include "cse/fockspace.hpp"
#include "oracles.hpp"

using namespace cse;

TEST_CASE("sector enumeration counts") {
    CHECK(enumerate_basis(8, 4, 0.0).size() == 36);    // C(4,2)^2
    CHECK(enumerate_basis(10, 5, 0.5).size() == 100);  // C(5,3) C(5,2)
    CHECK(enumerate_basis(4, 0, 0.0).size() == 1);     // vacuum
    CHECK_THROWS_AS(enumerate_basis(8, 3, 0.0), std::domain_error);
    CHECK_THROWS_AS(enumerate_basis(4, 6, 0.0), std::domain_error);
}

TEST_CASE("pair string hand examples") {
    // |1100>: orbitals 0 and 1 occupied
    auto r = apply_pair_string(0b0011, 2, 3, 1, 0);
    REQUIRE(r.has_value());
    CHECK(r->first == 0b1100);
    CHECK(r->second == 1);

    CHECK_FALSE(apply_pair_string(0b0011, 4, 5, 3, 2).has_value());  // annihilating empty

    auto n = apply_pair_string(0b0011, 0, 1, 1, 0);  // number-operator pair
    REQUIRE(n.has_value());
    CHECK(n->first == 0b0011);
    CHECK(n->second == 1);
}

TEST_CASE("pair strings match the list-based engine") {
    const DeterminantBasis b = enumerate_basis(6, 3, 0.5);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int t = 0; t < 500; ++t) {
        int i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
        if (i == j || k == l) continue;
        const Eigen::MatrixXd M = oracle::naive_pair_string_matrix(b, i, j, l, k);
        for (int col = 0; col < b.size(); ++col) {
            const auto r = apply_pair_string(b.dets[col], i, j, l, k);
            Eigen::VectorXd expect = M.col(col);
            if (r.has_value()) {
                const int row = b.find(r->first);
                if (row >= 0) {
                    CHECK(expect[row] == doctest::Approx(r->second));
                    expect[row] = 0.0;
                }
            }
            CHECK(expect.cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("anticommutation identity on the list engine") {
    // a+_p a_q + a_q a+_p = delta_pq as an operator on the sector
    const DeterminantBasis b = enumerate_basis(6, 2, 0.0);
    for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(b.size(), b.size());
            for (int col = 0; col < b.size(); ++col) {
                oracle::NaiveState s;
                s.amp[oracle::det_to_list(b.dets[col], 6)] = 1.0;
                auto r1 = oracle::naive_apply_string(s, {{p, true}, {q, false}});
                auto r2 = oracle::naive_apply_string(s, {{q, false}, {p, true}});
                for (const auto& st : {r1, r2})
                    for (const auto& [occ, a] : st.amp) {
                        Det d = 0;
                        for (int o : occ) d |= Det{1} << o;
                        const int row = b.find(d);
                        if (row >= 0) M(row, col) += a;
                    }
            }
            Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(b.size(), b.size());
            if (p == q) expect.setIdentity();
            CHECK((M - expect).cwiseAbs().maxCoeff() < 1e-14);
        }
}

TEST_CASE("apply_two_body against the dense oracle") {
    const DeterminantBasis b = enumerate_basis(6, 2, 0.0);
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;

    TwoBodyCoefficients F = TwoBodyCoefficients::zero(2, 6);
    const PairTable& pt = pair_table(6);
    for (const auto& q : pt.quads) F.F(q.ij, q.kl) = dist(rng);

    StateVector psi = StateVector::zero(b);
    for (int i = 0; i < b.size(); ++i) psi.c[i] = dist(rng);

    const Eigen::MatrixXd M = oracle::naive_two_body_matrix(b, F);
    const StateVector out = apply_two_body(F, psi);
    CHECK((out.c - M * psi.c).cwiseAbs().maxCoeff() < 1e-12);

    const StateVector outT = apply_two_body_transpose(F, psi);
    CHECK((outT.c - M.transpose() * psi.c).cwiseAbs().maxCoeff() < 1e-12);

    // zero operator, zero state
    const StateVector z = apply_two_body(TwoBodyCoefficients::zero(2, 6), psi);
    CHECK(z.c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("number-operator pair coefficient") {
    const DeterminantBasis b = enumerate_basis(6, 2, 0.0);
    TwoBodyCoefficients F = TwoBodyCoefficients::zero(2, 6);
    const PairTable& pt = pair_table(6);
    const int p01 = pt.pair_index(0, 1);
    F.F(p01, p01) = 2.5;
    StateVector psi = StateVector::zero(b);
    for (int i = 0; i < b.size(); ++i) psi.c[i] = 1.0;
    const StateVector out = apply_two_body(F, psi);
    for (int i = 0; i < b.size(); ++i) {
        const bool both = ((b.dets[i] & 0b11) == 0b11);
        CHECK(out.c[i] == doctest::Approx(both ? 2.5 : 0.0));
    }
}

TEST_CASE("apply_two_body linearity") {
    const DeterminantBasis b = enumerate_basis(6, 2, 0.0);
    std::mt19937 rng(9);
    std::normal_distribution<double> dist;
    const PairTable& pt = pair_table(6);
    auto random_f = [&] {
        TwoBodyCoefficients F = TwoBodyCoefficients::zero(2, 6);
        for (const auto& q : pt.quads) F.F(q.ij, q.kl) = dist(rng);
        return F;
    };
    auto random_psi = [&] {
        StateVector v = StateVector::zero(b);
        for (int i = 0; i < b.size(); ++i) v.c[i] = dist(rng);
        return v;
    };
    const auto F1 = random_f(), F2 = random_f();
    const auto p1 = random_psi(), p2 = random_psi();
    TwoBodyCoefficients Fsum = F1;
    Fsum.F += F2.F;
    StateVector psum = p1;
    psum.c += p2.c;
    CHECK((apply_two_body(Fsum, p1).c - apply_two_body(F1, p1).c - apply_two_body(F2, p1).c)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((apply_two_body(F1, psum).c - apply_two_body(F1, p1).c - apply_two_body(F1, p2).c)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("apply_hamiltonian against the dense oracle") {
    const DeterminantBasis b = enumerate_basis(6, 2, 0.0);
    const SpinOrbitalHamiltonian H = oracle::random_hamiltonian(6, 23);
    const Eigen::MatrixXd M = oracle::naive_hamiltonian_matrix(b, H);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);  // symmetric by construction

    std::mt19937 rng(2);
    std::normal_distribution<double> dist;
    StateVector psi = StateVector::zero(b);
    for (int i = 0; i < b.size(); ++i) psi.c[i] = dist(rng);
    const StateVector out = apply_hamiltonian(H, psi);
    CHECK((out.c - M * psi.c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("number-operator Hamiltonian") {
    const DeterminantBasis b = enumerate_basis(6, 4, 0.0);
    SpinOrbitalHamiltonian H;
    H.n_so = 6;
    H.h = Eigen::MatrixXd::Identity(6, 6);
    H.g.assign(6 * 6 * 6 * 6, 0.0);
    H.e_nuc = 0.0;
    StateVector psi = StateVector::zero(b);
    psi.c.setRandom();
    const StateVector out = apply_hamiltonian(H, psi);
    CHECK((out.c - 4.0 * psi.c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("S^2 expectation values") {
    {
        const DeterminantBasis b = enumerate_basis(8, 4, 0.0);
        const StateVector hf = StateVector::unit(b, 0b1111);  // closed shell
        CHECK(s_squared_expectation(hf) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(multiplicity(hf) == 1);
    }
    {
        const DeterminantBasis b = enumerate_basis(8, 2, 1.0);
        const StateVector aa = StateVector::unit(b, 0b0101);  // two alpha electrons
        CHECK(s_squared_expectation(aa) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(multiplicity(aa) == 3);
    }
}
