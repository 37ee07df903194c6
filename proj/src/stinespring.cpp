#include "qfact/stinespring.hpp"

#include <Eigen/LU>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qfact {

CVector StinespringData::span_coeff(const CMatrix& a_rep, const CVector& h) const {
    CVector c = channel.source->rep_algebra.coefficients(a_rep);
    return Eigen::kroneckerProduct(c, h).eval();
}

CMatrix StinespringData::sigma_of(const CMatrix& a_rep) const {
    CVector c = channel.source->rep_algebra.coefficients(a_rep);
    CMatrix out = CMatrix::Zero(L_dim, L_dim);
    for (size_t k = 0; k < sigma.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * sigma[k];
    return out;
}

StinespringData dilate(const StochasticMap& psi, const Tolerance& tol) {
    tol.validate();
    if (!psi.cp.ok)
        throw std::invalid_argument("dilate: channel is not completely positive");

    const auto& basis = psi.source->rep_algebra.basis;
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index d = psi.target->dim;

    CMatrix gram(m * d, m * d);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            gram.block(a * d, b * d, d, d) =
                psi.apply(basis[static_cast<size_t>(a)].adjoint() * basis[static_cast<size_t>(b)]);
    gram = 0.5 * (gram + gram.adjoint());

    auto q = gram_quotient(gram, tol);

    StinespringData out;
    out.channel = psi;
    out.L_dim = q.rank;
    out.embed = q.embed;
    out.kernel = q.kernel;
    out.embed_pinv = q.embed.adjoint() * (q.embed * q.embed.adjoint()).partialPivLu().inverse();

    const CMatrix id_d = CMatrix::Identity(d, d);
    out.sigma.reserve(static_cast<size_t>(m));
    for (Eigen::Index a = 0; a < m; ++a) {
        CMatrix coef(m, m);
        for (Eigen::Index b = 0; b < m; ++b)
            coef.col(b) = psi.source->rep_algebra.coefficients(basis[static_cast<size_t>(a)] *
                                                               basis[static_cast<size_t>(b)]);
        CMatrix lift = Eigen::kroneckerProduct(coef, id_d) * out.embed_pinv;
        CMatrix lifted_span = Eigen::kroneckerProduct(coef, id_d).eval();
        if (out.kernel.cols() > 0)
            out.sigma_welldef = std::max(out.sigma_welldef,
                                         operator_norm(out.embed * lifted_span * out.kernel));
        out.sigma.push_back(out.embed * lift);
    }

    const auto& comm = psi.target->commutant_algebra.basis;
    out.tau.reserve(comm.size());
    const CMatrix id_m = CMatrix::Identity(m, m);
    for (const auto& y : comm) {
        CMatrix lifted = Eigen::kroneckerProduct(id_m, y).eval();
        if (out.kernel.cols() > 0)
            out.tau_welldef = std::max(out.tau_welldef,
                                       operator_norm(out.embed * lifted * out.kernel));
        out.tau.push_back(out.embed * lifted * out.embed_pinv);
    }

    CVector unit_c = psi.source->rep_algebra.coefficients(
        CMatrix::Identity(psi.source->dim, psi.source->dim));
    out.V = out.embed * Eigen::kroneckerProduct(unit_c, id_d);

    CMatrix kappa = psi.source->vectorize.partialPivLu().inverse();
    CMatrix lam(m * d, psi.source->dim);
    for (Eigen::Index j = 0; j < psi.source->dim; ++j)
        lam.col(j) = Eigen::kroneckerProduct(CVector(kappa.col(j)), psi.target->omega).eval();
    out.Lambda = out.embed * lam;

    out.omega_phi = out.V * psi.target->omega;
    return out;
}

CMatrix tau_of(const StinespringData& d, const CMatrix& y, const Tolerance& tol) {
    const auto& comm = d.channel.target->commutant_algebra;
    double member = subspace_residual(y, comm.basis, tol);
    if (member > 100 * tol.residual_pass)
        throw std::invalid_argument("tau_of: argument is not in the target commutant");
    const Eigen::Index m = d.channel.source->rep_algebra.dim();
    CMatrix lifted = Eigen::kroneckerProduct(CMatrix::Identity(m, m), y).eval();
    return d.embed * lifted * d.embed_pinv;
}

double RelationReport::max_residual() const {
    double r = 0.0;
    for (const auto& [name, v] : rows) r = std::max(r, v);
    return r;
}

double RelationReport::at(const std::string& name) const {
    for (const auto& [n, v] : rows)
        if (n == name) return v;
    throw std::out_of_range("RelationReport: no row named " + name);
}

RelationReport verify_relations(const StinespringData& d, const Tolerance& tol) {
    RelationReport rep;
    const auto& psi = d.channel;
    const auto& basis = psi.source->rep_algebra.basis;
    const auto& comm = psi.target->commutant_algebra.basis;
    const Eigen::Index L = d.L_dim;

    rep.add("well-defined-sigma", d.sigma_welldef);
    rep.add("well-defined-tau", d.tau_welldef);
    rep.add("isometry-V", operator_norm(d.V.adjoint() * d.V -
                                        CMatrix::Identity(psi.target->dim, psi.target->dim)));
    rep.add("isometry-Lambda", operator_norm(d.Lambda.adjoint() * d.Lambda -
                                             CMatrix::Identity(psi.source->dim, psi.source->dim)));

    double st1 = 0.0, st2 = 0.0, recon = 0.0;
    CMatrix proj_lambda = d.Lambda * d.Lambda.adjoint();
    for (size_t a = 0; a < basis.size(); ++a) {
        st1 = std::max(st1, operator_norm(d.Lambda.adjoint() * d.sigma[a] * d.Lambda - basis[a]));
        st2 = std::max(st2, operator_norm(proj_lambda * d.sigma[a] - d.sigma[a] * proj_lambda));
        recon = std::max(recon, operator_norm(d.V.adjoint() * d.sigma[a] * d.V - psi.action[a]));
    }
    rep.add("st1", st1);
    rep.add("st2", st2);
    rep.add("reconstruction", recon);

    double stdual = 0.0, vtauv = 0.0, vvstar = 0.0;
    CMatrix proj_v = d.V * d.V.adjoint();
    for (size_t j = 0; j < comm.size(); ++j) {
        for (size_t a = 0; a < basis.size(); ++a)
            stdual = std::max(stdual, operator_norm(d.sigma[a] * d.tau[j] - d.tau[j] * d.sigma[a]));
        vtauv = std::max(vtauv, operator_norm(d.V.adjoint() * d.tau[j] * d.V - comm[j]));
        vvstar = std::max(vvstar, operator_norm(proj_v * d.tau[j] - d.tau[j] * proj_v));
    }
    rep.add("stdual", stdual);
    rep.add("vtauv", vtauv);
    rep.add("vvstar-tau-comm", vvstar);

    CMatrix u = contraction_u(psi);
    rep.add("u-eq-vstar-lambda", operator_norm(u - d.V.adjoint() * d.Lambda));

    // Lambda* (A (x) h) = A U* h on the spanning basis
    double lam_adj = 0.0;
    const Eigen::Index dt = psi.target->dim;
    for (size_t a = 0; a < basis.size(); ++a)
        for (Eigen::Index k = 0; k < dt; ++k) {
            CVector span = CVector::Zero(d.span_count());
            span(static_cast<Eigen::Index>(a) * dt + k) = 1.0;
            CVector lhs = d.Lambda.adjoint() * (d.embed * span);
            CVector rhs = basis[a] * (u.adjoint() * CVector::Unit(dt, k));
            lam_adj = std::max(lam_adj, (lhs - rhs).norm());
        }
    rep.add("lambda-adjoint", lam_adj);

    // expectation identity for E1 = V* . V and E2 = Lambda* . Lambda on
    // products sigma(A) tau(Y)
    double e1 = 0.0, e2 = 0.0;
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t j = 0; j < comm.size(); ++j) {
            CMatrix t = d.sigma[a] * d.tau[j];
            Complex mid = d.omega_phi.dot(t * d.omega_phi);
            Complex lhs1 = psi.target->omega.dot(d.V.adjoint() * t * d.V * psi.target->omega);
            Complex lhs2 = psi.source->omega.dot(d.Lambda.adjoint() * t * d.Lambda * psi.source->omega);
            e1 = std::max(e1, std::abs(lhs1 - mid));
            e2 = std::max(e2, std::abs(lhs2 - mid));
        }
    rep.add("e1-expectation", e1);
    rep.add("e2-expectation", e2);

    auto mk = markov_check(psi, tol);
    if (mk.markov) {
        auto prime = dual_prime(psi, tol);
        double st5 = 0.0;
        for (size_t j = 0; j < comm.size(); ++j) {
            CMatrix lhs = d.Lambda.adjoint() * d.tau[j] * d.Lambda;
            CMatrix rhs = prime.apply(prime.source->rep_algebra.project(comm[j]));
            st5 = std::max(st5, operator_norm(lhs - rhs));
        }
        rep.add("st5", st5);
    }
    (void)L;
    return rep;
}

WData w_antiunitary(const StochasticMap& phi, const Tolerance& tol) {
    auto mk = markov_check(phi, tol);
    if (!mk.markov)
        throw std::invalid_argument("w_antiunitary: map is not a preserving Markov operator");

    auto adj = adjoint_sharp(phi, tol);
    auto prime = dual_prime(phi, tol);

    WData out;
    out.dil_sharp = dilate(adj.sharp, tol);
    out.dil_prime = dilate(prime, tol);

    const auto& sharp_src = adj.sharp.source;             // M2 standard space
    const auto& j1 = phi.source->J;
    const auto& j2 = phi.target->J;
    const Eigen::Index d1 = phi.source->dim;
    const Eigen::Index m2 = sharp_src->rep_algebra.dim();

    // W (X (x) h) = J2 X J2 (x) J1 h columns over the sharp spanning family
    CMatrix targets(out.dil_prime.L_dim, m2 * d1);
    for (Eigen::Index a = 0; a < m2; ++a) {
        CMatrix x = anti_sandwich(j2, sharp_src->rep_algebra.basis[static_cast<size_t>(a)], j2);
        CVector xc = prime.source->rep_algebra.coefficients(x);
        for (Eigen::Index k = 0; k < d1; ++k) {
            CVector h = j1.mat.col(k);  // J1 applied to the k-th basis vector
            targets.col(a * d1 + k) =
                out.dil_prime.embed * Eigen::kroneckerProduct(xc, h).eval();
        }
    }
    CMatrix w = targets * out.dil_sharp.embed_pinv.conjugate();
    out.welldef_residual = operator_norm(w * out.dil_sharp.embed.conjugate() - targets);
    out.w = AntilinearOp{w};
    out.antiunitary_residual =
        operator_norm(w.adjoint() * w - CMatrix::Identity(out.dil_sharp.L_dim, out.dil_sharp.L_dim));

    // W* tau_{Phi'}(A1) W = tau_{Phi#}(J1 A1 J1)
    double tau_conj = 0.0;
    for (const auto& a1 : phi.source->rep_algebra.basis) {
        CMatrix lhs_mid = tau_of(out.dil_prime, prime.target->commutant_algebra.project(a1), tol);
        CMatrix lhs = w.transpose() * lhs_mid.conjugate() * w.conjugate();
        CMatrix rhs = tau_of(out.dil_sharp,
                             adj.sharp.target->commutant_algebra.project(anti_sandwich(j1, a1, j1)), tol);
        tau_conj = std::max(tau_conj, operator_norm(lhs - rhs));
    }
    out.tau_conjugation = tau_conj;

    double sigma_conj = 0.0;
    for (const auto& y2 : prime.source->rep_algebra.basis) {
        CMatrix lhs = w.transpose() * out.dil_prime.sigma_of(y2).conjugate() * w.conjugate();
        CMatrix rhs = out.dil_sharp.sigma_of(sharp_src->rep_algebra.project(anti_sandwich(j2, y2, j2)));
        sigma_conj = std::max(sigma_conj, operator_norm(lhs - rhs));
    }
    out.sigma_conjugation = sigma_conj;
    return out;
}

}  // namespace qfact
