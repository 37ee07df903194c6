#include "qfact/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>

namespace qfact {

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigs(const CMatrix& m, const Tolerance& tol,
                                                      const char* who) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    double herm = operator_norm(m - m.adjoint());
    double scale = std::max(1.0, operator_norm(m));
    if (herm > tol.residual_pass * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error(std::string(who) + ": eigendecomposition failed");
    return es;
}

}  // namespace

PsdFunctions psd_functions(const CMatrix& m, const Tolerance& tol) {
    tol.validate();
    auto es = hermitian_eigs(m, tol, "psd_functions");
    const auto& ev = es.eigenvalues();
    double lmax = ev.size() ? ev.maxCoeff() : 0.0;
    if (ev.size() && ev.minCoeff() < -tol.residual_pass * std::max(1.0, lmax))
        throw std::invalid_argument("psd_functions: matrix has a negative eigenvalue");

    double cut = tol.rank_cut * std::max(lmax, 0.0);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(ev.size());
    Eigen::VectorXd si = Eigen::VectorXd::Zero(ev.size());
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut) {
            s(i) = std::sqrt(ev(i));
            si(i) = 1.0 / s(i);
            ++rank;
        }
    }
    PsdFunctions out;
    out.sqrt = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
    out.pinv_sqrt = es.eigenvectors() * si.asDiagonal() * es.eigenvectors().adjoint();
    out.rank = rank;
    return out;
}

GramQuotient gram_quotient(const CMatrix& g, const Tolerance& tol) {
    tol.validate();
    auto es = hermitian_eigs(g, tol, "gram_quotient");
    const auto& ev = es.eigenvalues();
    double lmax = ev.size() ? ev.maxCoeff() : 0.0;
    if (ev.size() && ev.minCoeff() < -tol.residual_pass * std::max(1.0, lmax))
        throw std::invalid_argument("gram_quotient: Gram matrix is not PSD");

    double cut = tol.rank_cut * std::max(lmax, 0.0);
    const Eigen::Index m = g.rows();
    std::vector<Eigen::Index> keep, drop;
    for (Eigen::Index i = 0; i < m; ++i)
        (ev(i) > cut ? keep : drop).push_back(i);

    GramQuotient out;
    out.rank = static_cast<int>(keep.size());
    out.embed.resize(out.rank, m);
    for (Eigen::Index k = 0; k < out.rank; ++k)
        out.embed.row(k) = std::sqrt(ev(keep[k])) * es.eigenvectors().col(keep[k]).adjoint();
    out.kernel.resize(m, static_cast<Eigen::Index>(drop.size()));
    for (Eigen::Index k = 0; k < out.kernel.cols(); ++k)
        out.kernel.col(k) = es.eigenvectors().col(drop[k]);
    return out;
}

std::vector<CMatrix> commutation_nullspace(const std::vector<CMatrix>& gens,
                                           Eigen::Index dim, const Tolerance& tol) {
    tol.validate();
    const Eigen::Index n2 = dim * dim;
    for (const auto& g : gens)
        if (g.rows() != dim || g.cols() != dim)
            throw std::invalid_argument("commutation_nullspace: generator of wrong size");

    std::vector<CMatrix> basis;
    if (gens.empty()) {
        basis.reserve(n2);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) {
                CMatrix e = CMatrix::Zero(dim, dim);
                e(i, j) = 1.0;
                basis.push_back(std::move(e));
            }
        return basis;
    }

    // X commutes with G iff vec(X) lies in ker(G^T (x) I - I (x) G); sum of
    // ad^H ad over the generators shares that kernel and stays n^2 x n^2.
    CMatrix acc = CMatrix::Zero(n2, n2);
    const CMatrix id = CMatrix::Identity(dim, dim);
    for (const auto& g : gens) {
        CMatrix ad = Eigen::kroneckerProduct(g.transpose(), id) -
                     Eigen::kroneckerProduct(id, g);
        acc += ad.adjoint() * ad;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (acc + acc.adjoint()));
    const auto& ev = es.eigenvalues();
    double lmax = std::max(ev.maxCoeff(), 1.0);
    for (Eigen::Index i = 0; i < n2; ++i) {
        if (ev(i) <= tol.rank_cut * lmax) {
            CVector v = es.eigenvectors().col(i);
            basis.push_back(Eigen::Map<const CMatrix>(v.data(), dim, dim));
        }
    }
    return basis;
}

CMatrix anti_compose(const AntilinearOp& a, const AntilinearOp& b) {
    if (a.mat.cols() != b.mat.rows())
        throw std::invalid_argument("anti_compose: dimension mismatch");
    return a.mat * b.mat.conjugate();
}

AntilinearOp anti_adjoint(const AntilinearOp& a) {
    return AntilinearOp{a.mat.transpose()};
}

double subspace_residual(const CMatrix& x, const std::vector<CMatrix>& basis,
                         const Tolerance& tol) {
    tol.validate();
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            Complex p = trace_inner(basis[i], basis[j]);
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(p - expect) > 100 * tol.residual_pass)
                throw std::invalid_argument("subspace_residual: basis is not orthonormal");
        }
    CMatrix proj = CMatrix::Zero(x.rows(), x.cols());
    for (const auto& b : basis) proj += trace_inner(b, x) * b;
    return operator_norm(x - proj);
}

CMatrix anti_sandwich(const AntilinearOp& left, const CMatrix& a, const AntilinearOp& right) {
    return left.mat * a.conjugate() * right.mat.conjugate();
}

CMatrix hermitian_power(const CMatrix& m, double p, const Tolerance& tol) {
    auto es = hermitian_eigs(m, tol, "hermitian_power");
    Eigen::VectorXd ev = es.eigenvalues();
    double lmax = ev.size() ? ev.maxCoeff() : 0.0;
    double cut = tol.rank_cut * std::max(lmax, 0.0);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut)
            s(i) = std::pow(ev(i), p);
        else if (p >= 0.0)
            s(i) = 0.0;  // pseudo-power on the range
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix hermitian_imag_power(const CMatrix& m, double t, const Tolerance& tol) {
    auto es = hermitian_eigs(m, tol, "hermitian_imag_power");
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.size() && ev.minCoeff() <= 0.0)
        throw std::invalid_argument("hermitian_imag_power: matrix must be positive definite");
    CVector s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        s(i) = std::exp(Complex(0.0, t * std::log(ev(i))));
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix hermitian_log(const CMatrix& m, const Tolerance& tol) {
    auto es = hermitian_eigs(m, tol, "hermitian_log");
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.size() && ev.minCoeff() <= 0.0)
        throw std::invalid_argument("hermitian_log: matrix must be positive definite");
    Eigen::VectorXd s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) s(i) = std::log(ev(i));
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    double cut = std::sqrt(tol.rank_cut) * smax;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CVector onb_coefficients(const CMatrix& x, const std::vector<CMatrix>& basis) {
    CVector c(static_cast<Eigen::Index>(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k) c(static_cast<Eigen::Index>(k)) = trace_inner(basis[k], x);
    return c;
}

CMatrix onb_combine(const CVector& c, const std::vector<CMatrix>& basis) {
    if (basis.empty()) throw std::invalid_argument("onb_combine: empty basis");
    CMatrix out = CMatrix::Zero(basis[0].rows(), basis[0].cols());
    for (size_t k = 0; k < basis.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * basis[k];
    return out;
}

}  // namespace qfact
