#include <doctest.h>

#include "fixtures.hpp"
#include "qfact/gce.hpp"

using namespace qfact;
using fixtures::unit;

namespace {
const Tolerance tol{};

StochasticMap abelian_t2(const Tolerance& t) {
    Eigen::MatrixXd m(2, 2);
    m << 0.75, 0.25, 0.25, 0.75;
    Eigen::VectorXd p(2);
    p << 0.5, 0.5;
    return fixtures::classical_channel(m, p, t);
}
}  // namespace

TEST_CASE("standard form of the scalars") {
    auto r = generate(1, {}, tol);
    auto sf = standard_form(r, tol);
    CHECK(sf.space.dim == 1);
    CHECK(operator_norm(sf.Js().mat - CMatrix::Identity(1, 1)) < 1e-12);
}

TEST_CASE("standard form of M2 has the positive matrices as its cone") {
    auto r = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto sf = standard_form(r, tol);
    CHECK(sf.space.dim == 4);
    // every cone generator, pulled back to the algebra, is PSD
    CMatrix back(sf.space.dim, sf.space.dim);
    for (const auto& g : sf.cone_gens) {
        CMatrix el = sf.space.element_for_vector(g);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (el + el.adjoint()));
        CHECK(operator_norm(el - el.adjoint()) < 1e-9);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
    // pairings among cone generators are nonnegative
    for (const auto& a : sf.cone_gens)
        for (const auto& b : sf.cone_gens) CHECK(a.dot(b).real() > -1e-9);
}

TEST_CASE("standard form of a diagonal algebra has the entrywise-nonnegative cone") {
    auto r = fixtures::diagonal_space(Eigen::Vector4d(0.25, 0.25, 0.25, 0.25)).algebra;
    auto sf = standard_form(r, tol);
    CHECK(sf.space.dim == 4);
    for (const auto& g : sf.cone_gens) {
        CMatrix el = sf.space.element_for_vector(g);
        for (Eigen::Index i = 0; i < 4; ++i) {
            CHECK(el(i, i).real() > -1e-10);
            CHECK(std::abs(el(i, i).imag()) < 1e-10);
        }
    }
}

TEST_CASE("cone vector of the trace state is the trace vector") {
    auto r = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto sf = standard_form(r, tol);
    CVector omega_vals(r.dim());
    for (Eigen::Index k = 0; k < r.dim(); ++k)
        omega_vals(k) = r.basis[static_cast<size_t>(k)].trace() / 2.0;
    auto cv = cone_vector(sf, r, omega_vals, tol);
    CHECK(cv.state_residual < 1e-12);
    CHECK(cv.cone_pairing < 1e-10);
    CHECK((cv.xi - sf.space.omega).norm() < 1e-10);
}

TEST_CASE("cone vector of a density state is the root of the density") {
    auto r = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto sf = standard_form(r, tol);
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 2.0 / 3.0;
    rho(1, 1) = 1.0 / 3.0;
    CVector omega_vals(r.dim());
    for (Eigen::Index k = 0; k < r.dim(); ++k)
        omega_vals(k) = (rho * r.basis[static_cast<size_t>(k)]).trace();
    auto cv = cone_vector(sf, r, omega_vals, tol);
    CHECK(cv.state_residual < 1e-12);
    CHECK(cv.cone_pairing < 1e-10);
    CHECK(cv.density_membership < 1e-10);
    CHECK(operator_norm(cv.density - rho) < 1e-12);
    // xi is the class of a multiple of rho^{1/2}
    CMatrix el = sf.space.element_for_vector(cv.xi);
    CMatrix root = sf.space.to_rep(hermitian_power(rho, 0.5, tol));
    el /= std::sqrt(std::abs(trace_inner(el, el)));
    root /= std::sqrt(std::abs(trace_inner(root, root)));
    CHECK(operator_norm(el - root) < 1e-10);
}

TEST_CASE("cone vector of the coupling state is the entrywise root of the coupling") {
    Eigen::MatrixXd t(2, 2);
    t << 0.75, 0.25, 0.25, 0.75;
    Eigen::VectorXd p(2);
    p << 0.5, 0.5;
    auto coupling = fixtures::classical_coupling(t, p);

    auto phi = abelian_t2(tol);
    auto sd = make_sharp_dilation(phi, tol);
    auto jh = jhat_abelian(sd, tol);
    auto r = build_R(sd, jh, tol);
    auto sf = standard_form(r, tol);
    CVector omega_vals(r.dim());
    for (Eigen::Index k = 0; k < r.dim(); ++k)
        omega_vals(k) = sd.dil.omega_phi.dot(r.basis[static_cast<size_t>(k)] * sd.dil.omega_phi);
    auto cv = cone_vector(sf, r, omega_vals, tol);
    CHECK(cv.state_residual < 1e-10);
    CHECK(cv.cone_pairing < 1e-10);
    // density eigenvalues are the coupling weights p_i T_ij
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cv.density);
    Eigen::VectorXd got = es.eigenvalues();
    std::vector<double> expect = {coupling.pi(0, 0), coupling.pi(0, 1), coupling.pi(1, 0),
                                  coupling.pi(1, 1)};
    std::sort(expect.begin(), expect.end());
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(got(i) - expect[static_cast<size_t>(i)]) < 1e-10);
}

TEST_CASE("cone_vector rejects non-positive functionals") {
    auto r = fixtures::full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0).algebra;
    auto sf = standard_form(r, tol);
    CVector omega_vals(r.dim());
    for (Eigen::Index k = 0; k < r.dim(); ++k)
        omega_vals(k) = (fixtures::pauli_z() * r.basis[static_cast<size_t>(k)]).trace();
    CHECK_THROWS_AS(cone_vector(sf, r, omega_vals, tol), std::invalid_argument);
}

TEST_CASE("gce battery on the identity channel") {
    auto phi = fixtures::identity_channel(fixtures::m2_trace(tol), tol);
    auto sd = make_sharp_dilation(phi, tol);
    auto jh = jhat_deterministic(sd, tol);
    auto rep = gce_factorization(sd, jh, tol);
    CHECK(rep.cce1 < 1e-12);
    CHECK(rep.cce2 < 1e-12);
    CHECK(rep.cce_pass);
    CHECK(rep.nabla1_isometry < 1e-10);
    CHECK(rep.nabla2_isometry < 1e-10);
    CHECK(rep.e2_sigma_identity < 1e-10);  // E2 is the identity map on R = sigma(M2)
    CHECK(rep.e1_beta_identity < 1e-10);
    CHECK(rep.remark1_biconditional);
    CHECK(rep.omega_separating);
    CHECK(rep.prop5_grid1 < 1e-10);
    CHECK(rep.prop5_grid2 < 1e-10);
    CHECK(rep.corollary_sharp < 1e-10);
    REQUIRE(rep.certificate.has_value());
    CHECK(rep.certificate->valid);
}

TEST_CASE("gce battery on deterministic fixtures matches the Theta route") {
    for (auto phi : {fixtures::adu_channel(fixtures::m2_trace(tol), fixtures::hadamard(), tol),
                     fixtures::tensor_embedding_channel(tol)}) {
        auto sd = make_sharp_dilation(phi, tol);
        auto jh = jhat_deterministic(sd, tol);
        auto rep = gce_factorization(sd, jh, tol);
        CHECK(rep.cce1 < 1e-9);
        CHECK(rep.cce2 < 1e-9);
        CHECK(rep.remark1_biconditional);
        CHECK(rep.remark1_e1 < 1e-9);
        CHECK(rep.remark1_e2 < 1e-9);
        CHECK(rep.prop5_grid1 < 1e-8);
        CHECK(rep.prop5_grid2 < 1e-8);
        CHECK(rep.corollary_sharp < 1e-8);
        CHECK(rep.xi_isometry < 1e-9);
        CHECK(rep.xi_welldef < 1e-9);
        CHECK(rep.xi_v_nabla1 < 1e-9);
        CHECK(rep.xi_lambda_nabla2 < 1e-9);
        CHECK(rep.xi_jhat < 1e-9);
        REQUIRE(rep.certificate.has_value());
        CHECK(rep.certificate->valid);

        // the two routes produce the same moments omega(alpha(B) beta(A))
        auto theta_cert = deterministic_factorize(phi, tol);
        const auto& gce_cert = *rep.certificate;
        for (size_t ib = 0; ib < theta_cert.alpha.size(); ++ib)
            for (size_t ia = 0; ia < theta_cert.beta.size(); ++ia) {
                Complex m1 = theta_cert.omega.dot(theta_cert.alpha[ib] * theta_cert.beta[ia] *
                                                  theta_cert.omega);
                Complex m2 = gce_cert.omega.dot(gce_cert.alpha[ib] * gce_cert.beta[ia] *
                                                gce_cert.omega);
                CHECK(std::abs(m1 - m2) < 1e-9);
            }
    }
}

TEST_CASE("gce battery on the abelian fixture against the coupling oracle") {
    Eigen::MatrixXd t(2, 2);
    t << 0.75, 0.25, 0.25, 0.75;
    Eigen::VectorXd p(2);
    p << 0.5, 0.5;
    auto phi = abelian_t2(tol);
    auto sd = make_sharp_dilation(phi, tol);
    auto jh = jhat_abelian(sd, tol);
    auto rep = gce_factorization(sd, jh, tol);
    CHECK(rep.cce1 < 1e-9);
    CHECK(rep.cce2 < 1e-9);
    CHECK(rep.remark1_biconditional);
    CHECK(rep.e1_beta_identity < 1e-9);
    CHECK(rep.e2_sigma_identity < 1e-9);
    REQUIRE(rep.certificate.has_value());
    CHECK(rep.certificate->valid);
    CHECK(rep.certificate->minimal);

    // E2 is the classical conditional expectation onto the second marginal:
    // E2(alpha(f) beta(g))(i) = f(i) sum_j pi(i,j) g(j) / p(i)
    auto coupling = fixtures::classical_coupling(t, p);
    std::vector<CMatrix> beta = beta_images(sd, jh, tol);
    auto sf = standard_form(rep.R, tol);
    CVector omega_vals(rep.R.dim());
    for (Eigen::Index k = 0; k < rep.R.dim(); ++k)
        omega_vals(k) =
            sd.dil.omega_phi.dot(rep.R.basis[static_cast<size_t>(k)] * sd.dil.omega_phi);
    auto cv = cone_vector(sf, rep.R, omega_vals, tol);
    auto nb = nablas(sd, beta, sf, cv.xi, tol);
    auto e2 = gce_map(sf, nb.nabla2.mat, phi.target->J, rep.R);
    for (int fi = 0; fi < 2; ++fi)
        for (int gj = 0; gj < 2; ++gj) {
            CMatrix alpha_f = sd.dil.sigma_of(phi.target->to_rep(unit(fi, fi, 2)));
            CVector gc = phi.source->rep_algebra.coefficients(phi.source->to_rep(unit(gj, gj, 2)));
            CMatrix beta_g = CMatrix::Zero(sd.dil.L_dim, sd.dil.L_dim);
            for (size_t k = 0; k < beta.size(); ++k) beta_g += gc(static_cast<Eigen::Index>(k)) * beta[k];
            CVector rc = rep.R.coefficients(alpha_f * beta_g);
            CMatrix e2_val = CMatrix::Zero(2, 2);
            for (Eigen::Index k = 0; k < rep.R.dim(); ++k)
                e2_val += rc(k) * e2[static_cast<size_t>(k)];
            // expected diagonal kernel in the target GNS coordinates
            CMatrix expected = CMatrix::Zero(2, 2);
            expected(fi, fi) = coupling.pi(fi, gj) / p(fi);
            CHECK(operator_norm(e2_val - phi.target->to_rep(expected)) < 1e-9);
        }
}

TEST_CASE("wrong Jhat fails CCE with a visible gap and yields no certificate") {
    auto phi = fixtures::depolarizing_channel(fixtures::m2_trace(tol), 0.5, tol);
    auto sd = make_sharp_dilation(phi, tol);
    auto wrong = make_jhat(sd, CMatrix::Identity(sd.dil.L_dim, sd.dil.L_dim),
                           JhatProvenance::user_supplied, tol);
    auto rep = gce_factorization(sd, wrong, tol);
    CHECK_FALSE(rep.cce_pass);
    CHECK(rep.cce1 > 1e-3);
    CHECK_FALSE(rep.certificate.has_value());
    // Remark 1 backward direction: the maps differ too
    CHECK(rep.remark1_biconditional);
    CHECK(std::max(rep.remark1_e1, rep.remark1_e2) > 1e-3);
}
