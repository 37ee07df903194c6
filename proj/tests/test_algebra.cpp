#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "fixtures.hpp"
#include "qfact/algebra.hpp"

using namespace qfact;
using fixtures::unit;

namespace {
const Tolerance tol{};
}

TEST_CASE("generate with no generators gives the scalars") {
    auto a = generate(2, {}, tol);
    CHECK(a.dim() == 1);
    CHECK(contains(a, CMatrix::Identity(2, 2), tol) < 1e-12);
}

TEST_CASE("Pauli X and Z generate all of M2") {
    auto a = generate(2, {fixtures::pauli_x(), fixtures::pauli_z()}, tol);
    CHECK(a.dim() == 4);
    CHECK(check_algebra(a, tol).max() < 1e-10);
}

TEST_CASE("a matrix with distinct eigenvalues generates the diagonal algebra") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 2;
    d(2, 2) = 3;
    auto a = generate(3, {d}, tol);
    CHECK(a.dim() == 3);
    for (const auto& b : a.basis) {
        CMatrix off = b;
        off.diagonal().setZero();
        CHECK(operator_norm(off) < 1e-10);
    }
}

TEST_CASE("generate keeps an already orthonormal unit basis intact") {
    // fixture files rely on this: the action is given per basis element
    std::vector<CMatrix> units = {unit(0, 0, 2), unit(0, 1, 2), unit(1, 0, 2), unit(1, 1, 2)};
    auto a = generate(2, units, tol);
    REQUIRE(a.dim() == 4);
    for (int k = 0; k < 4; ++k) CHECK(operator_norm(a.basis[k] - units[k]) < 1e-12);
}

TEST_CASE("generate is idempotent") {
    auto a = generate(2, {fixtures::pauli_x()}, tol);
    auto again = generate(2, a.basis, tol);
    CHECK(again.dim() == a.dim());
    CHECK(span_distance(a, again, tol) < 1e-10);
}

TEST_CASE("commutant of M2 is trivial") {
    auto m2 = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto c = commutant(m2, tol);
    CHECK(c.dim() == 1);
}

TEST_CASE("the diagonal algebra is its own commutant") {
    auto d = fixtures::diagonal_space(Eigen::Vector3d(0.2, 0.3, 0.5)).algebra;
    auto c = commutant(d, tol);
    CHECK(c.dim() == 3);
    CHECK(span_distance(d, c, tol) < 1e-9);
}

TEST_CASE("commutant of A (x) 1 in M4 is 1 (x) B") {
    std::vector<CMatrix> gens;
    const CMatrix id2 = CMatrix::Identity(2, 2);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            gens.push_back(Eigen::kroneckerProduct(unit(i, j, 2), id2).eval());
    auto a = generate(4, gens, tol);
    auto c = commutant(a, tol);
    CHECK(c.dim() == 4);

    FiniteAlgebra expected;
    expected.ambient_dim = 4;
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            expected.basis.push_back(
                (Eigen::kroneckerProduct(id2, unit(i, j, 2)) / std::sqrt(2.0)).eval());
    CHECK(span_distance(c, expected, tol) < 1e-9);
}

TEST_CASE("double commutant recovers the algebra") {
    for (auto gens : {std::vector<CMatrix>{fixtures::pauli_x()},
                      std::vector<CMatrix>{unit(0, 0, 3)},
                      std::vector<CMatrix>{unit(0, 1, 3)}}) {
        auto a = generate(gens[0].rows(), gens, tol);
        auto cc = commutant(commutant(a, tol), tol);
        CHECK(cc.dim() == a.dim());
        CHECK(span_distance(a, cc, tol) < 1e-9);
    }
}

TEST_CASE("join is idempotent, monotone, commutative") {
    auto d = generate(2, {unit(0, 0, 2)}, tol);
    auto x = generate(2, {fixtures::pauli_x()}, tol);

    auto dd = join(d, d, tol);
    CHECK(dd.dim() == d.dim());
    CHECK(span_distance(dd, d, tol) < 1e-10);

    auto full = join(d, x, tol);
    CHECK(full.dim() == 4);
    CHECK(contains(full, d.basis[0], tol) < 1e-9);
    CHECK(contains(full, x.basis[0], tol) < 1e-9);

    auto full2 = join(x, d, tol);
    CHECK(span_distance(full, full2, tol) < 1e-9);
}

TEST_CASE("join of scalars with M2 is M2") {
    auto scalars = generate(2, {}, tol);
    auto m2 = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto j = join(scalars, m2, tol);
    CHECK(j.dim() == 4);
}

TEST_CASE("join rejects mixed ambient dimensions") {
    auto a2 = generate(2, {}, tol);
    auto a3 = generate(3, {}, tol);
    CHECK_THROWS_AS(join(a2, a3, tol), std::invalid_argument);
}

TEST_CASE("is_abelian") {
    CHECK(is_abelian(fixtures::diagonal_space(Eigen::Vector2d(0.5, 0.5)).algebra, tol));
    CHECK_FALSE(is_abelian(fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra, tol));
}

TEST_CASE("contains measures the projection defect") {
    auto d = fixtures::diagonal_space(Eigen::Vector2d(0.5, 0.5)).algebra;
    CHECK(std::abs(contains(d, fixtures::pauli_x(), tol) - 1.0) < 1e-12);
    CHECK(contains(d, fixtures::pauli_z(), tol) < 1e-12);
}
