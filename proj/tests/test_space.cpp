#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "qfact/space.hpp"

using namespace qfact;
using fixtures::unit;

namespace {
const Tolerance tol{};
}

TEST_CASE("tracial GNS of M2") {
    auto s = gns(fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0), tol);
    CHECK(s.dim == 4);
    // phi(a) = <Omega, pi(a) Omega> on the ambient basis
    for (Eigen::Index k = 0; k < 4; ++k) {
        Complex lhs = s.omega.dot(s.pi[static_cast<size_t>(k)] * s.omega);
        Complex rhs = s.origin->phi(s.origin->algebra.basis[static_cast<size_t>(k)]);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    // tracial state: Delta = 1, and S0 = J maps pi(a) Omega to pi(a*) Omega
    CHECK(operator_norm(s.Delta - CMatrix::Identity(4, 4)) < 1e-10);
    CMatrix e01 = s.to_rep(unit(0, 1, 2));
    CMatrix e10 = s.to_rep(unit(1, 0, 2));
    CHECK((s.J.apply(e01 * s.omega) - e10 * s.omega).norm() < 1e-10);
}

TEST_CASE("GNS of the uniform two-point space") {
    auto s = gns(fixtures::diagonal_space(Eigen::Vector2d(0.5, 0.5)), tol);
    CHECK(s.dim == 2);
    for (const auto& p : s.pi) {
        CMatrix off = p;
        off.diagonal().setZero();
        CHECK(operator_norm(off) < 1e-10);
    }
    CVector expected(2);
    expected << std::sqrt(0.5), std::sqrt(0.5);
    CHECK((s.omega.cwiseAbs() - expected.cwiseAbs()).norm() < 1e-10);
    CHECK(operator_norm(s.Delta - CMatrix::Identity(2, 2)) < 1e-10);
}

TEST_CASE("GNS inner products match the state") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    CHECK(s.dim == 4);
    CMatrix e01 = s.to_rep(unit(0, 1, 2));
    Complex val = (e01 * s.omega).dot(e01 * s.omega);
    CHECK(std::abs(val - 1.0 / 3.0) < 1e-12);

    // multiplicativity of pi over the ambient basis
    const auto& amb = s.origin->algebra;
    for (size_t i = 0; i < amb.basis.size(); ++i)
        for (size_t j = 0; j < amb.basis.size(); ++j) {
            CMatrix lhs = s.to_rep(amb.basis[i] * amb.basis[j]);
            CMatrix rhs = s.pi[i] * s.pi[j];
            CHECK(operator_norm(lhs - rhs) < 1e-10);
        }
}

TEST_CASE("modular spectrum of an unbalanced qubit state") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s.Delta);
    Eigen::VectorXd ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size());
    // eigenvalues are the ratios lambda_i / lambda_j: {1/2, 1, 1, 2}
    CHECK(std::abs(ev(0) - 0.5) < 1e-10);
    CHECK(std::abs(ev(1) - 1.0) < 1e-10);
    CHECK(std::abs(ev(2) - 1.0) < 1e-10);
    CHECK(std::abs(ev(3) - 2.0) < 1e-10);
}

TEST_CASE("standard space invariants hold on all fixture spaces") {
    std::vector<StandardSpace> spaces;
    spaces.push_back(gns(fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0), tol));
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    spaces.push_back(gns(fixtures::full_matrix_space(2, rho), tol));
    spaces.push_back(gns(fixtures::diagonal_space(Eigen::Vector3d(0.5, 0.3, 0.2)), tol));
    spaces.push_back(gns(fixtures::tensor_square_space(), tol));

    for (const auto& s : spaces) {
        auto chk = check_standard_space(s, tol);
        CHECK(chk.max() < 1e-9);
        // omega is cyclic and separating: vectorize is invertible
        Eigen::JacobiSVD<CMatrix> svd(s.vectorize);
        CHECK(svd.singularValues()(svd.singularValues().size() - 1) > 1e-8);
    }
}

TEST_CASE("modular conjugation is an involution (linalg example oracle)") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 0.7;
    rho(1, 1) = 0.3;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    CHECK(operator_norm(anti_compose(s.J, s.J) - CMatrix::Identity(4, 4)) < 1e-10);
}

TEST_CASE("modular flow fixes time zero and tracial states") {
    auto s_trace = gns(fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0), tol);
    CMatrix a = unit(0, 1, 2) + 2.0 * unit(1, 1, 2);
    CHECK(operator_norm(modular_flow(s_trace, 0.0, a, tol) - a) < 1e-10);
    CHECK(operator_norm(modular_flow(s_trace, 0.77, a, tol) - a) < 1e-10);
}

TEST_CASE("modular flow of a diagonal state twists off-diagonal units by a phase") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    CMatrix moved = modular_flow(s, 1.0, unit(0, 1, 2), tol);
    // sigma_t(E01) = (l0/l1)^{it} E01 with l0/l1 = 2
    Complex phase = std::exp(Complex(0.0, std::log(2.0)));
    CHECK(operator_norm(moved - phase * unit(0, 1, 2)) < 1e-10);

    // state invariance phi(sigma_t(a)) = phi(a)
    for (double t : {0.5, -1.0, 2.0}) {
        for (const auto& b : s.origin->algebra.basis) {
            CMatrix m = modular_flow(s, t, b, tol);
            CHECK(std::abs(s.origin->phi(m) - s.origin->phi(b)) < 1e-10);
        }
    }
}

TEST_CASE("modular flow agrees with the ambient density route") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 0.6;
    rho(1, 1) = 0.4;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    for (double t : {1.0, -0.5, 1.0 / 3.0}) {
        CMatrix u = hermitian_imag_power(rho, t, tol);
        for (const auto& b : s.origin->algebra.basis) {
            CMatrix ambient_route = u * b * u.adjoint();
            CMatrix gns_route = modular_flow(s, t, b, tol);
            CHECK(operator_norm(ambient_route - gns_route) < 1e-9);
        }
    }
}

TEST_CASE("standard space of the commutant shares J and inverts Delta") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    auto s = gns(fixtures::full_matrix_space(2, rho), tol);
    auto sc = standard_space(s.commutant_algebra, s.omega, tol);
    CHECK(operator_norm(sc.J.mat - s.J.mat) < 1e-9);
    CHECK(operator_norm(sc.Delta - hermitian_power(s.Delta, -1.0, tol)) < 1e-9);
}

TEST_CASE("non-faithful states are rejected") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    CHECK_THROWS_AS(gns(fixtures::full_matrix_space(2, rho), tol), FaithfulnessError);
}

TEST_CASE("modular_data demands a cyclic separating vector") {
    auto m2 = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    CVector v = CVector::Zero(2);
    v(0) = 1.0;
    // M2 on C^2: dimension mismatch, cannot be standard
    CHECK_THROWS_AS(modular_data(m2.basis, v, tol), CyclicityError);
}
