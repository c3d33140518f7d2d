#include "dqc/operators.hpp"

#include "dqc/linalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace dqc;

TEST_CASE("annihilation operator entries and errors") {
    const Operator a = annihilation(3);
    const DenseMatrix m = a.dense();
    CHECK(m(0, 1) == cplx(1.0));
    CHECK(m(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
    CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
}

TEST_CASE("truncated canonical commutator [a, a^dag]") {
    const Operator a = annihilation(10);
    const DenseMatrix comm = (a * a.adjoint() - a.adjoint() * a).dense();
    for (int k = 0; k < 9; ++k) CHECK(comm(k, k).real() == doctest::Approx(1.0));
    // Truncation artifact confined to the top level.
    CHECK(comm(9, 9).real() == doctest::Approx(-9.0));
}

TEST_CASE("ladder action a|1> = |0>") {
    const Operator a = annihilation(4);
    const DenseVector out = a.dense() * fock_state(4, 1);
    CHECK((out - fock_state(4, 0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("number operator is a^dag a") {
    const Operator a = annihilation(6);
    CHECK(((a.adjoint() * a) - number_operator(6)).dense().norm() == doctest::Approx(0.0));
}

TEST_CASE("a^dag a diagonal entries 0..dim-1") {
    const Operator a = annihilation(7);
    const DenseMatrix n = (a.adjoint() * a).dense();
    for (int k = 0; k < 7; ++k) CHECK(n(k, k).real() == doctest::Approx(double(k)));
}

TEST_CASE("embed places the operator on the requested factor") {
    const HilbertSpace space{3, 3};
    const Operator a = annihilation(3);

    SUBCASE("embed(a, 0) equals a x I") {
        const DenseMatrix direct = kron(a.sparse(), sparse_identity(3));
        CHECK((embed(a, 0, space).dense() - DenseMatrix(direct)).norm() == doctest::Approx(0.0));
    }
    SUBCASE("disjoint supports commute") {
        const HilbertSpace two_spins{2, 2};
        const Operator z0 = embed(pauli_z(), 0, two_spins);
        const Operator z1 = embed(pauli_z(), 1, two_spins);
        CHECK((z0 * z1 - z1 * z0).dense().norm() == doctest::Approx(0.0));
    }
    SUBCASE("trace scales with the complementary dimension") {
        const Operator n = number_operator(3);
        CHECK(embed(n, 0, space).trace().real() ==
              doctest::Approx(3.0 * n.trace().real()));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(embed(a, 2, space), std::invalid_argument);
        CHECK_THROWS_AS(embed(annihilation(4), 0, space), std::invalid_argument);
    }
}

TEST_CASE("embed preserves spectra with multiplicity total/local") {
    const HilbertSpace space{3, 2};
    const Operator n = number_operator(3);
    const DenseMatrix embedded = embed(n, 0, space).dense();
    auto eig = linalg::eig_hermitian(embedded, false);
    // Eigenvalues {0,1,2} each with multiplicity 2.
    std::vector<double> expect{0, 0, 1, 1, 2, 2};
    for (int j = 0; j < 6; ++j) CHECK(eig.values(j) == doctest::Approx(expect[j]).epsilon(1e-12));
}

TEST_CASE("vectorize/devectorize round trip and linearity") {
    Rng rng(7);
    const DenseMatrix m = testing::random_matrix(4, 4, rng);
    CHECK((devectorize(vectorize(m)) - m).norm() == doctest::Approx(0.0));
    CHECK(vectorize(DenseMatrix(DenseMatrix::Zero(3, 3))).norm() == doctest::Approx(0.0));
    CHECK_THROWS_AS(devectorize(DenseVector(DenseVector::Zero(5))), std::invalid_argument);
}

TEST_CASE("sandwich superoperator reproduces A rho B") {
    Rng rng(11);
    const HilbertSpace space{3};
    for (int trial = 0; trial < 20; ++trial) {
        const DenseMatrix am = testing::random_matrix(3, 3, rng);
        const DenseMatrix bm = testing::random_matrix(3, 3, rng);
        const DenseMatrix rho = testing::random_matrix(3, 3, rng);
        const Operator a(space, am), b(space, bm);
        const DenseVector lhs = sandwich_superop(a, b).apply(vectorize(rho));
        const DenseMatrix oracle = am * rho * bm;  // direct triple product
        CHECK((devectorize(lhs) - oracle).norm() < 1e-12 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("sandwich_superop(I, I) is the identity map") {
    const HilbertSpace space{4};
    const Operator id = identity(space);
    const DenseMatrix s = sandwich_superop(id, id).dense();
    CHECK((s - DenseMatrix::Identity(16, 16)).norm() == doctest::Approx(0.0));
}

TEST_CASE("left/right multiplication superoperators compose to the sandwich") {
    Rng rng(13);
    const HilbertSpace space{3};
    for (int trial = 0; trial < 10; ++trial) {
        const Operator a(space, testing::random_matrix(3, 3, rng));
        const Operator b(space, testing::random_matrix(3, 3, rng));
        const DenseMatrix composed = (left_mult_superop(a) * right_mult_superop(b)).dense();
        const DenseMatrix direct = sandwich_superop(a, b).dense();
        CHECK((composed - direct).norm() < 1e-12 * direct.norm());
    }
}

TEST_CASE("F^R then trace gives Tr[rho P] for Hermitian P") {
    Rng rng(17);
    const HilbertSpace space{4};
    DenseMatrix pm = testing::random_matrix(4, 4, rng);
    pm = 0.5 * (pm + pm.adjoint()).eval();
    const Operator p(space, pm);
    const DenseMatrix rho = testing::random_density(4, rng);
    const DenseVector v = left_mult_superop(p).apply(vectorize(rho));
    cplx tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += v(i + 4 * i);
    const cplx oracle = (rho * pm).trace();
    CHECK(std::abs(tr - oracle) < 1e-12);
}

TEST_CASE("superoperator action reproduces A rho B for density matrices up to dim 6") {
    Rng rng(19);
    for (int dim = 2; dim <= 6; ++dim) {
        const HilbertSpace space{dim};
        const Operator a(space, testing::random_matrix(dim, dim, rng));
        const Operator b(space, testing::random_matrix(dim, dim, rng));
        const DenseMatrix rho = testing::random_density(dim, rng);
        const DenseMatrix out =
            devectorize(sandwich_superop(a, b).apply(vectorize(rho)));
        const DenseMatrix oracle = a.dense() * rho * b.dense();
        CHECK((out - oracle).norm() < 1e-12 * oracle.norm());
    }
}

TEST_CASE("hermiticity predicate") {
    const HilbertSpace space{2};
    CHECK(pauli_x().is_hermitian());
    CHECK_FALSE(pauli_plus().is_hermitian());
    DenseMatrix nearly = pauli_x().dense();
    nearly(0, 1) += 1e-12;
    CHECK(Operator(space, nearly).is_hermitian(1e-10));
    nearly(0, 1) += 1e-8;
    CHECK_FALSE(Operator(space, nearly).is_hermitian(1e-10));
}

TEST_CASE("coherent state basics") {
    const DenseVector alpha = coherent_state(30, cplx(0.7, -0.3));
    CHECK(alpha.norm() == doctest::Approx(1.0));
    // <n> = |alpha|^2 for a well-truncated coherent state.
    const DenseMatrix n = number_operator(30).dense();
    CHECK(alpha.dot(n * alpha).real() == doctest::Approx(std::norm(cplx(0.7, -0.3))).epsilon(1e-10));
}

TEST_CASE("HilbertSpace invariants") {
    CHECK_THROWS_AS(HilbertSpace(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS((HilbertSpace{2, 0}), std::invalid_argument);
    CHECK(HilbertSpace({2, 3, 4}).total_dim == 24);
}
