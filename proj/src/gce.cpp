#include "qfact/gce.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qfact {

StandardFormData standard_form(const FiniteAlgebra& r, const Tolerance& tol) {
    tol.validate();
    ProbabilitySpace p;
    p.algebra = r;
    p.density = CMatrix::Identity(r.ambient_dim, r.ambient_dim) /
                static_cast<double>(r.ambient_dim);
    StandardFormData sf;
    sf.space = gns(p, tol);

    // generating family of the natural cone, basis elements plus a few
    // deterministic mixtures
    for (const auto& b : sf.space.rep_algebra.basis) {
        CVector v = b * sf.space.omega;
        sf.cone_gens.push_back(b * sf.space.J.apply(v));
    }
    const Eigen::Index m = sf.space.rep_algebra.dim();
    for (int s = 1; s <= 3; ++s) {
        CMatrix a = CMatrix::Zero(sf.space.dim, sf.space.dim);
        for (Eigen::Index k = 0; k < m; ++k) {
            double re = std::cos(0.7 * s + 1.3 * static_cast<double>(k));
            double im = std::sin(0.4 * s + 2.1 * static_cast<double>(k));
            a += Complex(re, im) * sf.space.rep_algebra.basis[static_cast<size_t>(k)];
        }
        sf.cone_gens.push_back(a * sf.space.J.apply(a * sf.space.omega));
    }
    return sf;
}

ConeVector cone_vector(const StandardFormData& sf, const FiniteAlgebra& r,
                       const CVector& omega_on_basis, const Tolerance& tol) {
    tol.validate();
    if (omega_on_basis.size() != r.dim())
        throw std::invalid_argument("cone_vector: wrong number of state values");

    // trace-dual density: Tr(D X) = omega(X) on the span of R
    CMatrix d = CMatrix::Zero(r.ambient_dim, r.ambient_dim);
    for (Eigen::Index k = 0; k < r.dim(); ++k)
        d += omega_on_basis(k) * r.basis[static_cast<size_t>(k)].adjoint();

    ConeVector out;
    double herm = operator_norm(d - d.adjoint());
    if (herm > 100 * tol.residual_pass)
        throw std::invalid_argument("cone_vector: state is not hermitian on R");
    d = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(d);
    if (es.eigenvalues().minCoeff() < -100 * tol.residual_pass)
        throw std::invalid_argument("cone_vector: state is not positive on R");
    out.density = d;

    CMatrix scaled = static_cast<double>(r.ambient_dim) * d;
    CMatrix root = psd_functions(scaled, tol).sqrt;
    out.density_membership = subspace_residual(root, r.basis, tol);
    out.xi = sf.vector_of(r.project(root));

    double sres = 0.0;
    for (Eigen::Index k = 0; k < r.dim(); ++k) {
        Complex via = out.xi.dot(sf.space.to_rep(r.basis[static_cast<size_t>(k)]) * out.xi);
        sres = std::max(sres, std::abs(via - omega_on_basis(k)));
    }
    out.state_residual = sres;

    double pairing = 0.0;
    for (const auto& g : sf.cone_gens)
        pairing = std::min(pairing, g.dot(out.xi).real());
    out.cone_pairing = -pairing;
    return out;
}

Nablas nablas(const SharpDilation& sd, const std::vector<CMatrix>& beta,
              const StandardFormData& sf, const CVector& xi, const Tolerance& tol) {
    const Eigen::Index d1 = sd.phi.source->dim;
    const Eigen::Index d2 = sd.phi.target->dim;

    Nablas out;
    out.nabla1.mat.resize(sf.space.dim, d1);
    for (Eigen::Index j = 0; j < d1; ++j) {
        CMatrix a = sd.phi.source->element_for_vector(CVector::Unit(d1, j));
        CVector c = sd.phi.source->rep_algebra.coefficients(a);
        CMatrix b = CMatrix::Zero(sd.dil.L_dim, sd.dil.L_dim);
        for (size_t k = 0; k < beta.size(); ++k) b += c(static_cast<Eigen::Index>(k)) * beta[k];
        out.nabla1.mat.col(j) = sf.space.to_rep(b) * xi;
    }
    out.nabla2.mat.resize(sf.space.dim, d2);
    for (Eigen::Index j = 0; j < d2; ++j) {
        CMatrix a = sd.phi.target->element_for_vector(CVector::Unit(d2, j));
        out.nabla2.mat.col(j) = sf.space.to_rep(sd.dil.sigma_of(a)) * xi;
    }
    out.nabla1.defect = operator_norm(out.nabla1.mat.adjoint() * out.nabla1.mat -
                                      CMatrix::Identity(d1, d1));
    out.nabla2.defect = operator_norm(out.nabla2.mat.adjoint() * out.nabla2.mat -
                                      CMatrix::Identity(d2, d2));
    (void)tol;
    return out;
}

std::vector<CMatrix> gce_map(const StandardFormData& sf, const CMatrix& nabla,
                             const AntilinearOp& j_i, const FiniteAlgebra& r) {
    std::vector<CMatrix> out;
    out.reserve(static_cast<size_t>(r.dim()));
    for (const auto& b : r.basis) {
        CMatrix z = anti_sandwich(sf.space.J, sf.space.to_rep(b), sf.space.J);
        CMatrix mid = nabla.adjoint() * z * nabla;
        out.push_back(j_i.mat * mid.conjugate() * j_i.mat.conjugate());
    }
    return out;
}

double cce_check(const CMatrix& nabla, const AntilinearOp& js, const AntilinearOp& ji) {
    return operator_norm(js.mat * nabla.conjugate() - nabla * ji.mat);
}

namespace {

double cp_defect_images(const FiniteAlgebra& r, const std::vector<CMatrix>& images,
                        Eigen::Index d) {
    const Eigen::Index m = r.dim();
    auto apply = [&](const CMatrix& x) {
        CVector c = r.coefficients(x);
        CMatrix out = CMatrix::Zero(d, d);
        for (Eigen::Index k = 0; k < m; ++k) out += c(k) * images[static_cast<size_t>(k)];
        return out;
    };
    CMatrix block(m * d, m * d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            block.block(i * d, j * d, d, d) =
                apply(r.basis[static_cast<size_t>(i)].adjoint() * r.basis[static_cast<size_t>(j)]);
    double herm = operator_norm(block - block.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (block + block.adjoint()));
    return std::max(herm, std::max(0.0, -es.eigenvalues().minCoeff()));
}

}  // namespace

GceReport gce_factorization(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol) {
    tol.validate();
    GceReport rep;
    rep.R = build_R(sd, jhat, tol);

    StandardFormData sf = standard_form(rep.R, tol);
    CVector omega_vals(rep.R.dim());
    for (Eigen::Index k = 0; k < rep.R.dim(); ++k)
        omega_vals(k) = sd.dil.omega_phi.dot(rep.R.basis[static_cast<size_t>(k)] * sd.dil.omega_phi);
    ConeVector cv = cone_vector(sf, rep.R, omega_vals, tol);

    std::vector<CMatrix> beta = beta_images(sd, jhat, tol);
    Nablas nb = nablas(sd, beta, sf, cv.xi, tol);
    rep.nabla1_isometry = nb.nabla1.defect;
    rep.nabla2_isometry = nb.nabla2.defect;

    const auto& j1 = sd.phi.source->J;
    const auto& j2 = sd.phi.target->J;
    rep.cce1 = cce_check(nb.nabla1.mat, sf.Js(), j1);
    rep.cce2 = cce_check(nb.nabla2.mat, sf.Js(), j2);
    rep.cce_pass = rep.cce1 <= tol.residual_pass && rep.cce2 <= tol.residual_pass;

    std::vector<CMatrix> e1 = gce_map(sf, nb.nabla1.mat, j1, rep.R);
    std::vector<CMatrix> e2 = gce_map(sf, nb.nabla2.mat, j2, rep.R);

    const auto& m1 = sd.phi.source->rep_algebra;
    const auto& m2 = sd.sharp.source->rep_algebra;
    for (Eigen::Index k = 0; k < rep.R.dim(); ++k) {
        const auto& b = rep.R.basis[static_cast<size_t>(k)];
        rep.e1_range = std::max(rep.e1_range, subspace_residual(e1[static_cast<size_t>(k)], m1.basis, tol));
        rep.e2_range = std::max(rep.e2_range, subspace_residual(e2[static_cast<size_t>(k)], m2.basis, tol));
        rep.e1_expectation = std::max(
            rep.e1_expectation,
            std::abs(sd.phi.source->phi(e1[static_cast<size_t>(k)]) - omega_vals(k)));
        rep.e2_expectation = std::max(
            rep.e2_expectation,
            std::abs(sd.phi.target->phi(e2[static_cast<size_t>(k)]) - omega_vals(k)));
        rep.remark1_e1 = std::max(rep.remark1_e1,
                                  operator_norm(e1[static_cast<size_t>(k)] -
                                                sd.dil.V.adjoint() * b * sd.dil.V));
        rep.remark1_e2 = std::max(rep.remark1_e2,
                                  operator_norm(e2[static_cast<size_t>(k)] -
                                                sd.dil.Lambda.adjoint() * b * sd.dil.Lambda));
    }
    auto apply_e = [&](const std::vector<CMatrix>& e, const CMatrix& x, Eigen::Index d) {
        CVector c = rep.R.coefficients(x);
        CMatrix out = CMatrix::Zero(d, d);
        for (Eigen::Index k = 0; k < rep.R.dim(); ++k) out += c(k) * e[static_cast<size_t>(k)];
        return out;
    };
    CMatrix unit1 = apply_e(e1, CMatrix::Identity(rep.R.ambient_dim, rep.R.ambient_dim),
                            sd.phi.source->dim);
    CMatrix unit2 = apply_e(e2, CMatrix::Identity(rep.R.ambient_dim, rep.R.ambient_dim),
                            sd.phi.target->dim);
    rep.e1_unital = operator_norm(unit1 - CMatrix::Identity(sd.phi.source->dim, sd.phi.source->dim));
    rep.e2_unital = operator_norm(unit2 - CMatrix::Identity(sd.phi.target->dim, sd.phi.target->dim));
    rep.e1_cp = cp_defect_images(rep.R, e1, sd.phi.source->dim);
    rep.e2_cp = cp_defect_images(rep.R, e2, sd.phi.target->dim);

    for (Eigen::Index k = 0; k < m1.dim(); ++k)
        rep.e1_beta_identity = std::max(
            rep.e1_beta_identity,
            operator_norm(apply_e(e1, beta[static_cast<size_t>(k)], sd.phi.source->dim) -
                          m1.basis[static_cast<size_t>(k)]));
    for (Eigen::Index k = 0; k < m2.dim(); ++k)
        rep.e2_sigma_identity = std::max(
            rep.e2_sigma_identity,
            operator_norm(apply_e(e2, sd.dil.sigma[static_cast<size_t>(k)], sd.phi.target->dim) -
                          m2.basis[static_cast<size_t>(k)]));

    bool maps_equal = rep.remark1_e1 <= tol.residual_pass && rep.remark1_e2 <= tol.residual_pass;
    rep.remark1_forward = !rep.cce_pass || maps_equal;
    rep.remark1_backward = !maps_equal || rep.cce_pass;
    rep.remark1_biconditional = rep.remark1_forward && rep.remark1_backward;

    // Proposition 5
    {
        CMatrix cols(sd.dil.L_dim, rep.R.dim());
        for (Eigen::Index k = 0; k < rep.R.dim(); ++k)
            cols.col(k) = rep.R.basis[static_cast<size_t>(k)] * sd.dil.omega_phi;
        Eigen::JacobiSVD<CMatrix> svd(cols);
        const auto& sv = svd.singularValues();
        double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
        double smax = sv.size() ? sv(0) : 0.0;
        rep.omega_separating =
            cols.cols() <= cols.rows() && smin > std::sqrt(tol.rank_cut) * std::max(smax, 1.0);
        rep.separating_witness = smin;
    }
    for (Eigen::Index k = 0; k < rep.R.dim(); ++k) {
        const auto& b = rep.R.basis[static_cast<size_t>(k)];
        for (Eigen::Index ia = 0; ia < m2.dim(); ++ia) {
            Complex lhs = sd.dil.omega_phi.dot(b * sd.dil.sigma[static_cast<size_t>(ia)] *
                                               sd.dil.omega_phi);
            Complex rhs = sd.phi.target->omega.dot(e2[static_cast<size_t>(k)] *
                                                   m2.basis[static_cast<size_t>(ia)] *
                                                   sd.phi.target->omega);
            rep.prop5_grid2 = std::max(rep.prop5_grid2, std::abs(lhs - rhs));
        }
        for (Eigen::Index ia = 0; ia < m1.dim(); ++ia) {
            Complex lhs = sd.dil.omega_phi.dot(b * beta[static_cast<size_t>(ia)] * sd.dil.omega_phi);
            Complex rhs = sd.phi.source->omega.dot(e1[static_cast<size_t>(k)] *
                                                   m1.basis[static_cast<size_t>(ia)] *
                                                   sd.phi.source->omega);
            rep.prop5_grid1 = std::max(rep.prop5_grid1, std::abs(lhs - rhs));
        }
    }

    // Corollary 1: Phi#(A2) = beta#(alpha(A2)) with beta# = V* . V
    for (Eigen::Index k = 0; k < m2.dim(); ++k)
        rep.corollary_sharp = std::max(
            rep.corollary_sharp,
            operator_norm(sd.dil.V.adjoint() * sd.dil.sigma[static_cast<size_t>(k)] * sd.dil.V -
                          sd.sharp.action[static_cast<size_t>(k)]));

    // Xi (A2 (x) A1 Omega1) = pi_s(sigma(A2) beta(A1)) xi
    {
        const Eigen::Index d1 = sd.phi.source->dim;
        CMatrix targets(sf.space.dim, m2.dim() * d1);
        for (Eigen::Index a = 0; a < m2.dim(); ++a)
            for (Eigen::Index k = 0; k < d1; ++k) {
                CMatrix a1 = sd.phi.source->element_for_vector(CVector::Unit(d1, k));
                CVector c = sd.phi.source->rep_algebra.coefficients(a1);
                CMatrix b = CMatrix::Zero(sd.dil.L_dim, sd.dil.L_dim);
                for (size_t kb = 0; kb < beta.size(); ++kb)
                    b += c(static_cast<Eigen::Index>(kb)) * beta[kb];
                CMatrix prod = sd.dil.sigma[static_cast<size_t>(a)] * b;
                targets.col(a * d1 + k) = sf.space.to_rep(rep.R.project(prod)) * cv.xi;
            }
        CMatrix xi_map = targets * sd.dil.embed_pinv;
        rep.xi_welldef = operator_norm(xi_map * sd.dil.embed - targets);
        rep.xi_isometry = operator_norm(xi_map.adjoint() * xi_map -
                                        CMatrix::Identity(sd.dil.L_dim, sd.dil.L_dim));
        rep.xi_v_nabla1 = operator_norm(xi_map * sd.dil.V - nb.nabla1.mat);
        rep.xi_lambda_nabla2 = operator_norm(xi_map * sd.dil.Lambda - nb.nabla2.mat);
        CMatrix lhs = jhat.op.mat * sd.dil.V.conjugate();
        CMatrix rhs = xi_map.adjoint() * sf.Js().mat * xi_map.conjugate() * sd.dil.V.conjugate();
        rep.xi_jhat = operator_norm(lhs - rhs);
    }

    if (rep.cce_pass && rep.omega_separating && rep.corollary_sharp <= tol.residual_pass) {
        FactorizationCertificate cert = certify(sd, jhat, tol);
        rep.certificate = std::move(cert);
    }
    return rep;
}

}  // namespace qfact
