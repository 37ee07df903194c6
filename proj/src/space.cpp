#include "qfact/space.hpp"

#include <Eigen/LU>
#include <cmath>

namespace qfact {

CMatrix StandardSpace::to_rep(const CMatrix& ambient) const {
    if (!origin) {
        // identity representation
        return ambient;
    }
    CVector c = origin->algebra.coefficients(ambient);
    CMatrix out = CMatrix::Zero(dim, dim);
    for (size_t k = 0; k < pi.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * pi[k];
    return out;
}

CMatrix StandardSpace::element_for_vector(const CVector& h) const {
    CVector c = vectorize.partialPivLu().solve(h);
    return rep_algebra.element(c);
}

std::pair<AntilinearOp, CMatrix> modular_data(const std::vector<CMatrix>& basis,
                                              const CVector& omega, const Tolerance& tol) {
    const Eigen::Index d = omega.size();
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    if (m != d)
        throw CyclicityError("modular_data: algebra dimension must equal space dimension");

    CMatrix cols(d, m), star_cols(d, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        cols.col(k) = basis[k] * omega;
        star_cols.col(k) = basis[k].adjoint() * omega;
    }
    Eigen::FullPivLU<CMatrix> lu(cols);
    lu.setThreshold(std::sqrt(tol.rank_cut));
    if (lu.rank() < d)
        throw CyclicityError("modular_data: omega is not cyclic and separating");

    // S0 (a omega) = a* omega, antilinear: S0.mat * conj(cols) = star_cols
    AntilinearOp s0{star_cols * lu.inverse().conjugate()};
    CMatrix delta = anti_compose(anti_adjoint(s0), s0);
    delta = 0.5 * (delta + delta.adjoint());
    CMatrix delta_m12 = hermitian_power(delta, -0.5, tol);
    AntilinearOp j{s0.mat * delta_m12.conjugate()};
    return {j, delta};
}

namespace {

void finish_space(StandardSpace& s, const Tolerance& tol) {
    auto [j, delta] = modular_data(s.rep_algebra.basis, s.omega, tol);
    s.J = j;
    s.Delta = delta;
    s.commutant_algebra = commutant(s.rep_algebra, tol);
    s.vectorize.resize(s.dim, s.rep_algebra.dim());
    for (Eigen::Index k = 0; k < s.rep_algebra.dim(); ++k)
        s.vectorize.col(k) = s.rep_algebra.basis[k] * s.omega;
}

}  // namespace

StandardSpace gns(const ProbabilitySpace& p, const Tolerance& tol) {
    tol.validate();
    const auto& alg = p.algebra;
    const Eigen::Index m = alg.dim();
    if (p.density.rows() != alg.ambient_dim || p.density.cols() != alg.ambient_dim)
        throw std::invalid_argument("gns: density has wrong shape");
    if (std::abs(p.phi(alg.identity()) - 1.0) > 100 * tol.residual_pass)
        throw std::invalid_argument("gns: state is not normalized");

    CMatrix gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            gram(i, j) = p.phi(alg.basis[i].adjoint() * alg.basis[j]);
    gram = 0.5 * (gram + gram.adjoint());

    auto q = gram_quotient(gram, tol);
    if (q.rank < m)
        throw FaithfulnessError("gns: state is not faithful on the algebra");

    StandardSpace s;
    s.dim = m;
    s.origin = p;
    // pi(E_i) acts by left multiplication on GNS classes.
    CMatrix embed_inv = q.embed.partialPivLu().inverse();
    s.pi.reserve(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        CMatrix mult(m, m);
        for (Eigen::Index jc = 0; jc < m; ++jc) {
            CVector c = alg.coefficients(alg.basis[i] * alg.basis[jc]);
            mult.col(jc) = c;
        }
        s.pi.push_back(q.embed * mult * embed_inv);
    }
    s.omega = q.embed * alg.coefficients(alg.identity());

    FiniteAlgebra rep;
    rep.ambient_dim = m;
    rep.basis = s.pi;
    // re-orthonormalize the image basis without changing the span
    rep = generate(m, s.pi, tol);
    if (rep.dim() != m)
        throw FaithfulnessError("gns: represented algebra has wrong dimension");
    s.rep_algebra = rep;
    finish_space(s, tol);
    return s;
}

SpacePtr gns_ptr(const ProbabilitySpace& p, const Tolerance& tol) {
    return std::make_shared<StandardSpace>(gns(p, tol));
}

StandardSpace standard_space(const FiniteAlgebra& a, const CVector& omega, const Tolerance& tol) {
    tol.validate();
    if (omega.size() != a.ambient_dim)
        throw std::invalid_argument("standard_space: vector dimension mismatch");
    if (a.dim() != a.ambient_dim)
        throw CyclicityError("standard_space: algebra cannot be standard on this space");
    StandardSpace s;
    s.dim = a.ambient_dim;
    s.pi = a.basis;
    s.omega = omega;
    s.rep_algebra = a;
    finish_space(s, tol);
    return s;
}

SpacePtr standard_space_ptr(const FiniteAlgebra& a, const CVector& omega, const Tolerance& tol) {
    return std::make_shared<StandardSpace>(standard_space(a, omega, tol));
}

CMatrix modular_flow_rep(const StandardSpace& s, double t, const CMatrix& x_rep, const Tolerance& tol) {
    CMatrix u = hermitian_imag_power(s.Delta, t, tol);
    CMatrix moved = u * x_rep * u.adjoint();
    double drift = subspace_residual(moved, s.rep_algebra.basis, tol);
    if (drift > 100 * tol.residual_pass)
        throw std::runtime_error("modular_flow: result drifted out of the algebra");
    return s.rep_algebra.project(moved);
}

CMatrix modular_flow(const StandardSpace& s, double t, const CMatrix& a, const Tolerance& tol) {
    CMatrix x = s.to_rep(a);
    CMatrix moved = modular_flow_rep(s, t, x, tol);
    if (!s.origin) return moved;
    // pull back through pi
    const Eigen::Index m = s.rep_algebra.dim();
    CMatrix pi_cols(m * m, m);
    for (Eigen::Index k = 0; k < m; ++k)
        pi_cols.col(k) = Eigen::Map<const CVector>(s.pi[k].data(), m * m);
    CVector rhs = Eigen::Map<const CVector>(moved.data(), m * m);
    CVector c = pi_cols.colPivHouseholderQr().solve(rhs);
    CMatrix out = CMatrix::Zero(s.origin->algebra.ambient_dim, s.origin->algebra.ambient_dim);
    for (Eigen::Index k = 0; k < m; ++k) out += c(k) * s.origin->algebra.basis[k];
    return out;
}

double StandardSpaceCheck::max() const {
    double r = std::max(j_omega, delta_omega);
    r = std::max(r, j_involution);
    r = std::max(r, j_delta_j);
    r = std::max(r, j_commutant);
    return std::max(r, kms_boundary);
}

StandardSpaceCheck check_standard_space(const StandardSpace& s, const Tolerance& tol) {
    StandardSpaceCheck out;
    out.j_omega = (s.J.apply(s.omega) - s.omega).norm();
    out.delta_omega = (s.Delta * s.omega - s.omega).norm();
    out.j_involution = operator_norm(anti_compose(s.J, s.J) - CMatrix::Identity(s.dim, s.dim));
    CMatrix delta_inv = hermitian_power(s.Delta, -1.0, tol);
    out.j_delta_j = operator_norm(anti_sandwich(s.J, s.Delta, s.J) - delta_inv);
    for (const auto& b : s.rep_algebra.basis) {
        CMatrix jbj = anti_sandwich(s.J, b, s.J);
        out.j_commutant = std::max(out.j_commutant,
                                   subspace_residual(jbj, s.commutant_algebra.basis, tol));
    }
    // boundary identity <S a Omega, S b Omega> = <b Omega, Delta a Omega>
    CMatrix d12 = hermitian_power(s.Delta, 0.5, tol);
    AntilinearOp s0{s.J.mat * d12.conjugate()};
    for (const auto& a : s.rep_algebra.basis)
        for (const auto& b : s.rep_algebra.basis) {
            CVector sa = s0.apply(a * s.omega);
            CVector sb = s0.apply(b * s.omega);
            Complex lhs = sa.dot(sb);
            Complex rhs = (b * s.omega).dot(s.Delta * (a * s.omega));
            out.kms_boundary = std::max(out.kms_boundary, std::abs(lhs - rhs));
        }
    return out;
}

}  // namespace qfact
