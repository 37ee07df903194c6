#include "qfact/channel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qfact {

CMatrix StochasticMap::apply(const CMatrix& x_rep) const {
    CVector c = source->rep_algebra.coefficients(x_rep);
    CMatrix out = CMatrix::Zero(target->dim, target->dim);
    for (size_t k = 0; k < action.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * action[k];
    return out;
}

namespace {

/// Most negative eigenvalue (as a positive defect) plus hermiticity defect
/// of the block Gram [Phi(B_i* B_j)]_{ij}.
double cp_defect(const StochasticMap& phi) {
    const auto& basis = phi.source->rep_algebra.basis;
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index d = phi.target->dim;
    CMatrix block(m * d, m * d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            block.block(i * d, j * d, d, d) = phi.apply(basis[i].adjoint() * basis[j]);
    double herm = operator_norm(block - block.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (block + block.adjoint()));
    double neg = std::max(0.0, -es.eigenvalues().minCoeff());
    return std::max(herm, neg);
}

void compute_flags(StochasticMap& phi, const Tolerance& tol) {
    const Eigen::Index d2 = phi.target->dim;
    CMatrix unit_image = phi.apply(CMatrix::Identity(phi.source->dim, phi.source->dim));
    phi.unital.residual = operator_norm(unit_image - CMatrix::Identity(d2, d2));
    phi.unital.ok = phi.unital.residual <= tol.residual_pass;

    phi.cp.residual = cp_defect(phi);
    phi.cp.ok = phi.cp.residual <= tol.residual_pass;

    double pres = 0.0;
    for (Eigen::Index k = 0; k < phi.source->rep_algebra.dim(); ++k) {
        Complex lhs = phi.target->phi(phi.action[static_cast<size_t>(k)]);
        Complex rhs = phi.source->phi(phi.source->rep_algebra.basis[static_cast<size_t>(k)]);
        pres = std::max(pres, std::abs(lhs - rhs));
    }
    phi.state_preserving.residual = pres;
    phi.state_preserving.ok = pres <= tol.residual_pass;
}

}  // namespace

StochasticMap make_map(SpacePtr source, SpacePtr target,
                       const std::vector<CMatrix>& action_on_rep_basis, const Tolerance& tol) {
    tol.validate();
    if (!source || !target) throw std::invalid_argument("make_map: null space");
    if (static_cast<Eigen::Index>(action_on_rep_basis.size()) != source->rep_algebra.dim())
        throw std::invalid_argument("make_map: wrong number of basis images");
    for (const auto& img : action_on_rep_basis)
        if (img.rows() != target->dim || img.cols() != target->dim)
            throw std::invalid_argument("make_map: image has wrong shape");

    StochasticMap phi;
    phi.source = std::move(source);
    phi.target = std::move(target);
    phi.action = action_on_rep_basis;
    compute_flags(phi, tol);
    return phi;
}

StochasticMap make_map_ambient(SpacePtr source, SpacePtr target,
                               const std::vector<CMatrix>& images_of_ambient_basis,
                               const Tolerance& tol) {
    if (!source->origin)
        throw std::invalid_argument("make_map_ambient: source has no ambient algebra");
    const auto& amb = source->origin->algebra;
    if (images_of_ambient_basis.size() != static_cast<size_t>(amb.dim()))
        throw std::invalid_argument("make_map_ambient: wrong number of images");
    // Phi(rep basis_k): decompose rep basis in pi-images of the ambient basis.
    const Eigen::Index m = source->rep_algebra.dim();
    CMatrix pi_cols(m * m, m);
    for (Eigen::Index k = 0; k < m; ++k)
        pi_cols.col(k) = Eigen::Map<const CVector>(source->pi[static_cast<size_t>(k)].data(), m * m);
    Eigen::ColPivHouseholderQR<CMatrix> qr(pi_cols);

    std::vector<CMatrix> action;
    action.reserve(static_cast<size_t>(m));
    for (Eigen::Index k = 0; k < m; ++k) {
        CVector rhs = Eigen::Map<const CVector>(source->rep_algebra.basis[static_cast<size_t>(k)].data(), m * m);
        CVector c = qr.solve(rhs);
        CMatrix img_ambient = CMatrix::Zero(target->origin ? target->origin->algebra.ambient_dim : target->dim,
                                            target->origin ? target->origin->algebra.ambient_dim : target->dim);
        for (Eigen::Index i = 0; i < m; ++i) img_ambient += c(i) * images_of_ambient_basis[static_cast<size_t>(i)];
        action.push_back(target->to_rep(img_ambient));
    }
    return make_map(std::move(source), std::move(target), action, tol);
}

StochasticMap compose(const StochasticMap& outer, const StochasticMap& inner, const Tolerance& tol) {
    if (inner.target->dim != outer.source->dim)
        throw std::invalid_argument("compose: dimension mismatch");
    std::vector<CMatrix> action;
    action.reserve(inner.action.size());
    for (const auto& img : inner.action) action.push_back(outer.apply(img));
    return make_map(inner.source, outer.target, action, tol);
}

CMatrix contraction_u(const StochasticMap& phi) {
    const Eigen::Index m = phi.source->rep_algebra.dim();
    CMatrix rhs(phi.target->dim, m);
    for (Eigen::Index k = 0; k < m; ++k)
        rhs.col(k) = phi.action[static_cast<size_t>(k)] * phi.target->omega;
    return rhs * phi.source->vectorize.partialPivLu().inverse();
}

AdjointReport adjoint_sharp(const StochasticMap& phi, const Tolerance& tol) {
    const auto& b1 = phi.source->rep_algebra.basis;
    const auto& b2 = phi.target->rep_algebra.basis;
    const Eigen::Index m1 = static_cast<Eigen::Index>(b1.size());
    const Eigen::Index m2 = static_cast<Eigen::Index>(b2.size());

    // phi1(B1_k A_j) coefficient matrix; invertible since phi1 is faithful.
    CMatrix lhs(m1, m1);
    for (Eigen::Index j = 0; j < m1; ++j)
        for (Eigen::Index k = 0; k < m1; ++k)
            lhs(j, k) = phi.source->phi(b1[static_cast<size_t>(k)] * b1[static_cast<size_t>(j)]);
    Eigen::PartialPivLU<CMatrix> lu(lhs);

    std::vector<CMatrix> action;
    action.reserve(static_cast<size_t>(m2));
    for (Eigen::Index ib = 0; ib < m2; ++ib) {
        CVector rhs(m1);
        for (Eigen::Index j = 0; j < m1; ++j) {
            CMatrix prod = b2[static_cast<size_t>(ib)] * phi.action[static_cast<size_t>(j)];
            rhs(j) = phi.target->phi(prod);
        }
        CVector c = lu.solve(rhs);
        action.push_back(phi.source->rep_algebra.element(c));
    }

    AdjointReport out;
    out.sharp = make_map(phi.target, phi.source, action, tol);
    out.cp_residual = out.sharp.cp.residual;
    out.valid = out.sharp.stochastic();
    return out;
}

double MarkovReport::residual() const {
    return std::max(cond_adjoint.residual, std::max(cond_modular.residual, cond_j.residual));
}

MarkovReport markov_check(const StochasticMap& phi, const Tolerance& tol) {
    MarkovReport out;

    auto adj = adjoint_sharp(phi, tol);
    out.cond_adjoint.residual = std::max(adj.sharp.cp.residual,
                                         std::max(adj.sharp.unital.residual,
                                                  adj.sharp.state_preserving.residual));
    out.cond_adjoint.ok = adj.valid;

    // (ii) exact generator form Phi([log D1, A]) = [log D2, Phi(A)], plus
    // sampled flow times as redundancy.
    CMatrix k1 = hermitian_log(phi.source->Delta, tol);
    CMatrix k2 = hermitian_log(phi.target->Delta, tol);
    double mod_res = 0.0;
    for (const auto& a : phi.source->rep_algebra.basis) {
        CMatrix da = k1 * a - a * k1;
        CMatrix pa = phi.apply(a);
        CMatrix lhs = phi.apply(phi.source->rep_algebra.project(da));
        CMatrix rhs = k2 * pa - pa * k2;
        mod_res = std::max(mod_res, operator_norm(lhs - rhs));
    }
    for (double t : {1.0, -1.0, 0.5, -0.5, 1.0 / 3.0}) {
        CMatrix u1 = hermitian_imag_power(phi.source->Delta, t, tol);
        CMatrix u2 = hermitian_imag_power(phi.target->Delta, t, tol);
        for (const auto& a : phi.source->rep_algebra.basis) {
            CMatrix flowed = phi.source->rep_algebra.project(u1 * a * u1.adjoint());
            CMatrix lhs = phi.apply(flowed);
            CMatrix rhs = u2 * phi.apply(a) * u2.adjoint();
            mod_res = std::max(mod_res, operator_norm(lhs - rhs));
        }
    }
    out.cond_modular.residual = mod_res;
    out.cond_modular.ok = mod_res <= tol.residual_pass;

    // (iii) J2 U = U J1 as antilinear operators
    CMatrix u = contraction_u(phi);
    out.cond_j.residual = operator_norm(phi.target->J.mat * u.conjugate() - u * phi.source->J.mat);
    out.cond_j.ok = out.cond_j.residual <= tol.residual_pass;

    out.agree = (out.cond_adjoint.ok == out.cond_modular.ok) &&
                (out.cond_modular.ok == out.cond_j.ok);
    out.markov = out.cond_adjoint.ok && out.cond_modular.ok && out.cond_j.ok;
    return out;
}

StochasticMap dual_prime(const StochasticMap& phi, const Tolerance& tol) {
    auto mk = markov_check(phi, tol);
    if (!mk.markov)
        throw std::invalid_argument("dual_prime: map is not a preserving Markov operator");
    auto adj = adjoint_sharp(phi, tol);

    SpacePtr src = standard_space_ptr(phi.target->commutant_algebra, phi.target->omega, tol);
    SpacePtr tgt = standard_space_ptr(phi.source->commutant_algebra, phi.source->omega, tol);

    std::vector<CMatrix> action;
    action.reserve(src->rep_algebra.basis.size());
    for (const auto& y : src->rep_algebra.basis) {
        CMatrix j2yj2 = anti_sandwich(phi.target->J, y, phi.target->J);
        CMatrix sharp_img = adj.sharp.apply(phi.target->rep_algebra.project(j2yj2));
        action.push_back(anti_sandwich(phi.source->J, sharp_img, phi.source->J));
    }
    return make_map(src, tgt, action, tol);
}

TensorFactorization tensor_state_factorization(const ProbabilitySpace& p, const Tolerance& tol) {
    TensorFactorization out;
    SpacePtr base = gns_ptr(p, tol);
    const Eigen::Index d = base->dim;

    FiniteAlgebra tensor_alg;
    tensor_alg.ambient_dim = d * d;
    for (const auto& a : base->rep_algebra.basis)
        for (const auto& b : base->rep_algebra.basis)
            tensor_alg.basis.push_back(Eigen::kroneckerProduct(a, b).eval());

    CVector omega2(d * d);
    omega2 = Eigen::kroneckerProduct(base->omega, base->omega).eval();
    SpacePtr tspace = standard_space_ptr(tensor_alg, omega2, tol);
    out.tensor_space = tspace;

    const CMatrix id = CMatrix::Identity(d, d);
    std::vector<CMatrix> alpha_action, beta_action;
    for (const auto& a : base->rep_algebra.basis) {
        alpha_action.push_back(tspace->rep_algebra.project(Eigen::kroneckerProduct(a, id).eval()));
        beta_action.push_back(tspace->rep_algebra.project(Eigen::kroneckerProduct(id, a).eval()));
    }
    out.alpha = make_map(base, tspace, alpha_action, tol);
    out.beta = make_map(base, tspace, beta_action, tol);

    auto alpha_sharp = adjoint_sharp(out.alpha, tol);
    auto beta_sharp = adjoint_sharp(out.beta, tol);

    for (const auto& a : base->rep_algebra.basis)
        for (const auto& b : base->rep_algebra.basis) {
            CMatrix ab = Eigen::kroneckerProduct(a, b).eval();
            CMatrix lhs_a = alpha_sharp.sharp.apply(tspace->rep_algebra.project(ab));
            CMatrix rhs_a = base->phi(b) * a;
            out.alpha_sharp_formula = std::max(out.alpha_sharp_formula, operator_norm(lhs_a - rhs_a));
            CMatrix lhs_b = beta_sharp.sharp.apply(tspace->rep_algebra.project(ab));
            CMatrix rhs_b = base->phi(a) * b;
            out.beta_sharp_formula = std::max(out.beta_sharp_formula, operator_norm(lhs_b - rhs_b));
        }
    for (const auto& a : base->rep_algebra.basis) {
        CMatrix lhs = beta_sharp.sharp.apply(out.alpha.apply(a));
        CMatrix rhs = base->phi(a) * id;
        out.beta_sharp_alpha = std::max(out.beta_sharp_alpha, operator_norm(lhs - rhs));
    }
    return out;
}

}  // namespace qfact
