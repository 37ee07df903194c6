#include "qfact/factorize.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qfact {

const char* to_string(JhatProvenance p) {
    switch (p) {
        case JhatProvenance::deterministic_canonical: return "deterministic-canonical";
        case JhatProvenance::abelian_w: return "abelian-W";
        case JhatProvenance::user_supplied: return "user-supplied";
    }
    return "?";
}

SharpDilation make_sharp_dilation(const StochasticMap& phi, const Tolerance& tol) {
    auto mk = markov_check(phi, tol);
    if (!mk.markov)
        throw std::invalid_argument("make_sharp_dilation: map is not a preserving Markov operator");
    SharpDilation sd;
    sd.phi = phi;
    sd.sharp = adjoint_sharp(phi, tol).sharp;
    sd.dil = dilate(sd.sharp, tol);
    return sd;
}

double multiplicativity_residual(const StochasticMap& phi) {
    const auto& basis = phi.source->rep_algebra.basis;
    double r = 0.0;
    for (const auto& a : basis)
        for (const auto& b : basis)
            r = std::max(r, operator_norm(phi.apply(a * b) - phi.apply(a) * phi.apply(b)));
    return r;
}

namespace {

void jhat_residuals(JHat& j, const SharpDilation& sd) {
    const Eigen::Index L = sd.dil.L_dim;
    j.antiunitary_residual =
        operator_norm(j.op.mat.adjoint() * j.op.mat - CMatrix::Identity(L, L));
    j.involution_residual =
        operator_norm(j.op.mat * j.op.mat.conjugate() - CMatrix::Identity(L, L));
    j.antiunij_residual = operator_norm(j.op.mat * sd.dil.V.conjugate() -
                                        sd.dil.V * sd.phi.source->J.mat);
}

/// Smallest singular value of the map T -> T omega restricted to span(mats).
std::pair<bool, double> separating_witness(const std::vector<CMatrix>& mats, const CVector& omega,
                                           const Tolerance& tol) {
    CMatrix cols(omega.size(), static_cast<Eigen::Index>(mats.size()));
    for (size_t k = 0; k < mats.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = mats[k] * omega;
    Eigen::JacobiSVD<CMatrix> svd(cols);
    double smin = svd.singularValues().size()
                      ? svd.singularValues()(svd.singularValues().size() - 1)
                      : 0.0;
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    bool sep = cols.cols() <= cols.rows() && smin > std::sqrt(tol.rank_cut) * std::max(smax, 1.0);
    return {sep, smin};
}

bool cyclic_witness(const std::vector<CMatrix>& mats, const CVector& omega, const Tolerance& tol) {
    CMatrix cols(omega.size(), static_cast<Eigen::Index>(mats.size()));
    for (size_t k = 0; k < mats.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = mats[k] * omega;
    Eigen::JacobiSVD<CMatrix> svd(cols);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > std::sqrt(tol.rank_cut) * std::max(smax, 1.0)) ++rank;
    return rank == omega.size();
}

}  // namespace

JHat make_jhat(const SharpDilation& sd, const CMatrix& mat, JhatProvenance prov,
               const Tolerance& tol) {
    tol.validate();
    if (mat.rows() != sd.dil.L_dim || mat.cols() != sd.dil.L_dim)
        throw std::invalid_argument("make_jhat: matrix does not act on L_{Phi#}");
    JHat j;
    j.op = AntilinearOp{mat};
    j.provenance = prov;
    jhat_residuals(j, sd);
    return j;
}

JHat jhat_deterministic(const SharpDilation& sd, const Tolerance& tol) {
    tol.validate();
    double mult = multiplicativity_residual(sd.phi);
    if (mult > tol.residual_pass)
        throw std::invalid_argument("jhat_deterministic: map is not deterministic");
    // Omega_{Phi#} must be cyclic for sigma(M2)', i.e. separating for sigma(M2).
    auto [sep, witness] = separating_witness(sd.dil.sigma, sd.dil.omega_phi, tol);
    if (!sep)
        throw CyclicityError("jhat_deterministic: Omega_{Phi#} is not cyclic for the commutant");

    const auto& m2 = sd.sharp.source->rep_algebra.basis;  // M2 on H2
    const auto& j1 = sd.phi.source->J;
    const auto& j2 = sd.phi.target->J;
    const Eigen::Index d1 = sd.phi.source->dim;
    const Eigen::Index d2 = sd.phi.target->dim;
    CMatrix u = contraction_u(sd.phi);  // H1 -> H2

    // Jhat* (A2 (x) h1) = Lambda J2 A2 U h1
    CMatrix targets(sd.dil.L_dim, static_cast<Eigen::Index>(m2.size()) * d1);
    for (size_t a = 0; a < m2.size(); ++a) {
        CMatrix leg = j2.mat * (m2[a] * u).conjugate();  // d2 x d1
        targets.block(0, static_cast<Eigen::Index>(a) * d1, sd.dil.L_dim, d1) = sd.dil.Lambda * leg;
    }
    CMatrix jstar = targets * sd.dil.embed_pinv.conjugate();
    double welldef = operator_norm(jstar * sd.dil.embed.conjugate() - targets);

    JHat j;
    j.op = anti_adjoint(AntilinearOp{jstar});
    j.provenance = JhatProvenance::deterministic_canonical;
    jhat_residuals(j, sd);
    j.extras["well-defined"] = welldef;
    j.extras["multiplicativity"] = mult;
    j.extras["separating-witness"] = witness;

    // Lambda* Jhat* = J2 Lambda* and V* Jhat* = J1 V*
    j.extras["lambda-compat"] = operator_norm(sd.dil.Lambda.adjoint() * jstar -
                                              j2.mat * sd.dil.Lambda.adjoint().conjugate());
    j.extras["v-compat"] = operator_norm(sd.dil.V.adjoint() * jstar -
                                         j1.mat * sd.dil.V.adjoint().conjugate());

    // Jhat* tau(J1 A1 J1) Jhat = sigma(Phi(A1))
    double sandwich = 0.0;
    for (size_t k = 0; k < sd.phi.source->rep_algebra.basis.size(); ++k) {
        const CMatrix& a1 = sd.phi.source->rep_algebra.basis[k];
        CMatrix arg = sd.sharp.target->commutant_algebra.project(anti_sandwich(j1, a1, j1));
        CMatrix t = tau_of(sd.dil, arg, tol);
        CMatrix lhs = jstar * t.conjugate() * j.op.mat.conjugate();
        CMatrix rhs = sd.dil.sigma_of(sd.phi.action[k]);
        sandwich = std::max(sandwich, operator_norm(lhs - rhs));
    }
    j.extras["tau-sandwich"] = sandwich;
    return j;
}

JHat jhat_abelian(const SharpDilation& sd, const Tolerance& tol) {
    tol.validate();
    if (!is_abelian(sd.phi.source->rep_algebra, tol) || !is_abelian(sd.phi.target->rep_algebra, tol))
        throw std::invalid_argument("jhat_abelian: both algebras must be abelian");
    double self1 = span_distance(sd.phi.source->rep_algebra, sd.phi.source->commutant_algebra, tol);
    double self2 = span_distance(sd.phi.target->rep_algebra, sd.phi.target->commutant_algebra, tol);
    if (self1 > tol.residual_pass || self2 > tol.residual_pass)
        throw std::invalid_argument("jhat_abelian: algebras are not maximal abelian");

    // Phi# = Phi' under M_i = M_i'; verified as a residual.
    auto prime = dual_prime(sd.phi, tol);
    double sharp_prime = 0.0;
    for (Eigen::Index k = 0; k < sd.sharp.source->rep_algebra.dim(); ++k) {
        const CMatrix& b = sd.sharp.source->rep_algebra.basis[static_cast<size_t>(k)];
        CMatrix via_prime = prime.apply(prime.source->rep_algebra.project(b));
        sharp_prime = std::max(sharp_prime,
                               operator_norm(via_prime - sd.sharp.action[static_cast<size_t>(k)]));
    }

    const auto& m2 = sd.sharp.source->rep_algebra;
    const auto& j1 = sd.phi.source->J;
    const auto& j2 = sd.phi.target->J;
    const Eigen::Index d1 = sd.phi.source->dim;

    // W (X (x) h) = J2 X J2 (x) J1 h on the (now identified) space L_{Phi#}
    CMatrix targets(sd.dil.L_dim, m2.dim() * d1);
    double member = 0.0;
    for (Eigen::Index a = 0; a < m2.dim(); ++a) {
        CMatrix x = anti_sandwich(j2, m2.basis[static_cast<size_t>(a)], j2);
        member = std::max(member, subspace_residual(x, m2.basis, tol));
        CVector xc = m2.coefficients(x);
        for (Eigen::Index k = 0; k < d1; ++k)
            targets.col(a * d1 + k) =
                sd.dil.embed * Eigen::kroneckerProduct(xc, CVector(j1.mat.col(k))).eval();
    }
    CMatrix w = targets * sd.dil.embed_pinv.conjugate();

    JHat j;
    j.op = AntilinearOp{w};
    j.provenance = JhatProvenance::abelian_w;
    jhat_residuals(j, sd);
    j.extras["well-defined"] = operator_norm(w * sd.dil.embed.conjugate() - targets);
    j.extras["sharp-equals-prime"] = sharp_prime;
    j.extras["commutant-identification"] = member;
    return j;
}

std::vector<CMatrix> beta_images(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol) {
    const auto& j1 = sd.phi.source->J;
    std::vector<CMatrix> out;
    out.reserve(sd.phi.source->rep_algebra.basis.size());
    for (const auto& a1 : sd.phi.source->rep_algebra.basis) {
        CMatrix arg = sd.sharp.target->commutant_algebra.project(anti_sandwich(j1, a1, j1));
        CMatrix t = tau_of(sd.dil, arg, tol);
        // beta(A1) = Jhat* tau(J1 A1 J1) Jhat
        AntilinearOp jstar = anti_adjoint(jhat.op);
        out.push_back(jstar.mat * t.conjugate() * jhat.op.mat.conjugate());
    }
    return out;
}

FiniteAlgebra build_R(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol) {
    std::vector<CMatrix> gens = sd.dil.sigma;
    AntilinearOp jstar = anti_adjoint(jhat.op);
    for (const auto& t : sd.dil.tau)
        gens.push_back(jstar.mat * t.conjugate() * jhat.op.mat.conjugate());
    return generate(sd.dil.L_dim, gens, tol);
}

namespace {

void reconstruction_residuals(FactorizationCertificate& cert, const SharpDilation& sd) {
    double recon = 0.0, recon_sharp = 0.0;
    for (size_t k = 0; k < cert.beta.size(); ++k) {
        CMatrix via = sd.dil.Lambda.adjoint() * cert.beta[k] * sd.dil.Lambda;
        recon = std::max(recon, operator_norm(via - sd.phi.action[k]));
    }
    for (size_t k = 0; k < cert.alpha.size(); ++k) {
        CMatrix via = sd.dil.V.adjoint() * cert.alpha[k] * sd.dil.V;
        recon_sharp = std::max(recon_sharp, operator_norm(via - sd.sharp.action[k]));
    }
    cert.reconstruction_residual = recon;
    cert.reconstruction_residual_sharp = recon_sharp;
}

void homomorphism_residuals(FactorizationCertificate& cert, const SharpDilation& sd) {
    const auto& m2 = sd.sharp.source->rep_algebra;
    const auto& m1 = sd.phi.source->rep_algebra;
    double am = 0.0, bm = 0.0, st = 0.0;
    auto omega_val = [&](const CMatrix& t) { return cert.omega.dot(t * cert.omega); };
    for (Eigen::Index i = 0; i < m2.dim(); ++i) {
        for (Eigen::Index j = 0; j < m2.dim(); ++j) {
            CMatrix prod = m2.basis[static_cast<size_t>(i)] * m2.basis[static_cast<size_t>(j)];
            CVector c = m2.coefficients(prod);
            CMatrix alpha_prod = CMatrix::Zero(sd.dil.L_dim, sd.dil.L_dim);
            for (Eigen::Index k = 0; k < m2.dim(); ++k)
                alpha_prod += c(k) * cert.alpha[static_cast<size_t>(k)];
            am = std::max(am, operator_norm(alpha_prod - cert.alpha[static_cast<size_t>(i)] *
                                                             cert.alpha[static_cast<size_t>(j)]));
        }
        st = std::max(st, std::abs(omega_val(cert.alpha[static_cast<size_t>(i)]) -
                                   sd.phi.target->phi(m2.basis[static_cast<size_t>(i)])));
    }
    for (Eigen::Index i = 0; i < m1.dim(); ++i) {
        for (Eigen::Index j = 0; j < m1.dim(); ++j) {
            CMatrix prod = m1.basis[static_cast<size_t>(i)] * m1.basis[static_cast<size_t>(j)];
            CVector c = m1.coefficients(prod);
            CMatrix beta_prod = CMatrix::Zero(sd.dil.L_dim, sd.dil.L_dim);
            for (Eigen::Index k = 0; k < m1.dim(); ++k)
                beta_prod += c(k) * cert.beta[static_cast<size_t>(k)];
            bm = std::max(bm, operator_norm(beta_prod - cert.beta[static_cast<size_t>(i)] *
                                                            cert.beta[static_cast<size_t>(j)]));
        }
        st = std::max(st, std::abs(omega_val(cert.beta[static_cast<size_t>(i)]) -
                                   sd.phi.source->phi(m1.basis[static_cast<size_t>(i)])));
    }
    cert.alpha_multiplicative = am;
    cert.beta_multiplicative = bm;
    cert.state_transport = st;
}

void minimality(FactorizationCertificate& cert, const SharpDilation& sd, const Tolerance& tol) {
    std::vector<CMatrix> gens = cert.alpha;
    gens.insert(gens.end(), cert.beta.begin(), cert.beta.end());
    FiniteAlgebra gen = generate(sd.dil.L_dim, gens, tol);
    cert.minimal_residual = span_distance(gen, cert.R, tol);
    cert.minimal = cert.minimal_residual <= tol.residual_pass;
}

}  // namespace

FactorizationCertificate certify(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol) {
    tol.validate();
    FactorizationCertificate cert;
    cert.omega = sd.dil.omega_phi;
    cert.R = build_R(sd, jhat, tol);
    cert.extras["antiunij"] = jhat.antiunij_residual;
    cert.extras["jhat-antiunitary"] = jhat.antiunitary_residual;

    const auto& m1 = sd.phi.source->rep_algebra;
    const auto& m2 = sd.sharp.source->rep_algebra;
    for (const auto& r : cert.R.basis) {
        cert.cond1_a = std::max(cert.cond1_a,
                                subspace_residual(sd.dil.V.adjoint() * r * sd.dil.V, m1.basis, tol));
        cert.cond1_b = std::max(cert.cond1_b, subspace_residual(
                                                  sd.dil.Lambda.adjoint() * r * sd.dil.Lambda,
                                                  m2.basis, tol));
    }

    auto [sep, witness] = separating_witness(cert.R.basis, cert.omega, tol);
    cert.omega_separating = sep;
    cert.separating_witness = witness;
    cert.omega_cyclic = cyclic_witness(cert.R.basis, cert.omega, tol);

    cert.alpha = sd.dil.sigma;
    cert.beta = beta_images(sd, jhat, tol);
    reconstruction_residuals(cert, sd);
    homomorphism_residuals(cert, sd);
    minimality(cert, sd, tol);

    cert.valid = jhat.admissible(tol) && cert.cond1_a <= tol.residual_pass &&
                 cert.cond1_b <= tol.residual_pass && cert.omega_separating &&
                 cert.reconstruction_residual <= tol.residual_pass &&
                 cert.reconstruction_residual_sharp <= tol.residual_pass;
    return cert;
}

FactorizationCertificate deterministic_factorize(const StochasticMap& phi, const Tolerance& tol) {
    tol.validate();
    double mult = multiplicativity_residual(phi);
    if (mult > tol.residual_pass)
        throw std::invalid_argument("deterministic_factorize: map is not multiplicative");
    SharpDilation sd = make_sharp_dilation(phi, tol);

    FactorizationCertificate cert;
    cert.omega = sd.dil.omega_phi;
    cert.R = generate(sd.dil.L_dim, sd.dil.sigma, tol);
    cert.alpha = sd.dil.sigma;
    cert.beta.reserve(phi.action.size());
    for (const auto& img : phi.action) cert.beta.push_back(sd.dil.sigma_of(img));  // Theta

    for (const auto& r : cert.R.basis) {
        cert.cond1_a = std::max(cert.cond1_a,
                                subspace_residual(sd.dil.V.adjoint() * r * sd.dil.V,
                                                  phi.source->rep_algebra.basis, tol));
        cert.cond1_b = std::max(cert.cond1_b,
                                subspace_residual(sd.dil.Lambda.adjoint() * r * sd.dil.Lambda,
                                                  sd.sharp.source->rep_algebra.basis, tol));
    }
    auto [sep, witness] = separating_witness(cert.R.basis, cert.omega, tol);
    cert.omega_separating = sep;
    cert.separating_witness = witness;
    cert.omega_cyclic = cyclic_witness(cert.R.basis, cert.omega, tol);

    // section 3 duality chains for sigma# = Lambda* . Lambda and
    // Theta# = V* . V
    double sigma_dual = 0.0, theta_dual = 0.0;
    const auto& m2 = sd.sharp.source->rep_algebra;
    const auto& m1 = phi.source->rep_algebra;
    for (Eigen::Index ib = 0; ib < m2.dim(); ++ib) {
        const CMatrix& sb = sd.dil.sigma[static_cast<size_t>(ib)];
        CMatrix sharp_b = sd.dil.Lambda.adjoint() * sb * sd.dil.Lambda;
        for (Eigen::Index ia = 0; ia < m2.dim(); ++ia) {
            Complex lhs = cert.omega.dot(sb * sd.dil.sigma[static_cast<size_t>(ia)] * cert.omega);
            Complex rhs = sd.phi.target->omega.dot(sharp_b * m2.basis[static_cast<size_t>(ia)] *
                                                   sd.phi.target->omega);
            sigma_dual = std::max(sigma_dual, std::abs(lhs - rhs));
        }
        CMatrix theta_sharp_b = sd.dil.V.adjoint() * sb * sd.dil.V;
        for (Eigen::Index ia = 0; ia < m1.dim(); ++ia) {
            Complex lhs = cert.omega.dot(sb * cert.beta[static_cast<size_t>(ia)] * cert.omega);
            Complex rhs = sd.phi.source->omega.dot(theta_sharp_b * m1.basis[static_cast<size_t>(ia)] *
                                                   sd.phi.source->omega);
            theta_dual = std::max(theta_dual, std::abs(lhs - rhs));
        }
    }
    cert.extras["sigma-duality"] = sigma_dual;
    cert.extras["theta-duality"] = theta_dual;
    cert.extras["multiplicativity"] = mult;

    reconstruction_residuals(cert, sd);
    homomorphism_residuals(cert, sd);
    minimality(cert, sd, tol);

    cert.valid = cert.cond1_a <= tol.residual_pass && cert.cond1_b <= tol.residual_pass &&
                 cert.omega_separating && cert.reconstruction_residual <= tol.residual_pass &&
                 cert.reconstruction_residual_sharp <= tol.residual_pass &&
                 sigma_dual <= tol.residual_pass && theta_dual <= tol.residual_pass;
    return cert;
}

SufficientCheck sufficient_check(const SharpDilation& sd, const JHat& jhat,
                                 const std::vector<CMatrix>& beta, const Tolerance& tol) {
    SufficientCheck out;
    out.jhat_lambda = operator_norm(jhat.op.mat * sd.dil.Lambda.conjugate() -
                                    sd.dil.Lambda * sd.phi.target->J.mat);
    for (const auto& s : sd.dil.sigma)
        for (const auto& b : beta)
            out.sigma_in_beta_comm = std::max(out.sigma_in_beta_comm, operator_norm(s * b - b * s));

    const auto& j1 = sd.phi.source->J;
    AntilinearOp jstar = anti_adjoint(jhat.op);
    const auto& m1c = sd.sharp.target->commutant_algebra;  // M1'
    for (size_t ia = 0; ia < sd.dil.sigma.size(); ++ia) {
        const CMatrix& a2 = sd.sharp.source->rep_algebra.basis[ia];
        for (const auto& y1 : m1c.basis) {
            CMatrix mid = jstar.mat * tau_of(sd.dil, y1, tol).conjugate() * jhat.op.mat.conjugate();
            CMatrix core = sd.dil.sigma[ia] * mid;
            CMatrix lhs_l = sd.dil.Lambda.adjoint() * core * sd.dil.Lambda;
            CMatrix rhs_l = a2 * sd.phi.apply(sd.phi.source->rep_algebra.project(
                                     anti_sandwich(j1, y1, j1)));
            out.product_lambda = std::max(out.product_lambda, operator_norm(lhs_l - rhs_l));
            CMatrix lhs_v = sd.dil.V.adjoint() * core * sd.dil.V;
            CMatrix rhs_v = sd.sharp.action[ia] * (j1.mat * y1.conjugate() * j1.mat.conjugate());
            out.product_v = std::max(out.product_v, operator_norm(lhs_v - rhs_v));
        }
    }
    out.ok = out.jhat_lambda <= tol.residual_pass && out.sigma_in_beta_comm <= tol.residual_pass;
    return out;
}

bool minimality_check(const FactorizationCertificate& cert, const Tolerance& tol) {
    if (!cert.valid) throw std::invalid_argument("minimality_check: certificate is not valid");
    return cert.minimal;
}

}  // namespace qfact
