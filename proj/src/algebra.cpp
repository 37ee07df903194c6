#include "qfact/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qfact {

namespace {

double frob(const CMatrix& m) { return std::sqrt(std::abs(trace_inner(m, m))); }

/// Gram-Schmidt a candidate against the basis (twice, for stability);
/// appends the normalized remainder when it is numerically new.
bool adjoin(std::vector<CMatrix>& basis, CMatrix cand, double keep_cut) {
    double scale = std::max(1.0, frob(cand));
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) cand -= trace_inner(b, cand) * b;
    double r = frob(cand);
    if (r <= keep_cut * scale) return false;
    basis.push_back(cand / r);
    return true;
}

}  // namespace

FiniteAlgebra generate(Eigen::Index ambient_dim, const std::vector<CMatrix>& gens,
                       const Tolerance& tol) {
    tol.validate();
    if (ambient_dim <= 0) throw std::invalid_argument("generate: ambient_dim must be positive");
    for (const auto& g : gens)
        if (g.rows() != ambient_dim || g.cols() != ambient_dim)
            throw std::invalid_argument("generate: generator of wrong size");

    const double keep_cut = std::sqrt(tol.rank_cut);
    const Eigen::Index full = ambient_dim * ambient_dim;

    FiniteAlgebra a;
    a.ambient_dim = ambient_dim;
    for (const auto& g : gens) adjoin(a.basis, g, keep_cut);
    for (const auto& g : gens) adjoin(a.basis, g.adjoint(), keep_cut);
    adjoin(a.basis, CMatrix::Identity(ambient_dim, ambient_dim), keep_cut);

    size_t fresh_from = 0;
    while (a.dim() < full) {
        size_t old_size = a.basis.size();
        std::vector<CMatrix> added;
        for (size_t i = fresh_from; i < old_size; ++i) {
            for (size_t j = 0; j < old_size; ++j) {
                if (adjoin(a.basis, a.basis[i] * a.basis[j], keep_cut))
                    added.push_back(a.basis.back());
                if (a.dim() == full) break;
                if (j < fresh_from) {
                    if (adjoin(a.basis, a.basis[j] * a.basis[i], keep_cut))
                        added.push_back(a.basis.back());
                    if (a.dim() == full) break;
                }
            }
            if (a.dim() == full) break;
        }
        for (const auto& m : added) {
            adjoin(a.basis, m.adjoint(), keep_cut);
            if (a.dim() == full) break;
        }
        if (a.basis.size() == old_size) break;
        fresh_from = old_size;
    }
    return a;
}

FiniteAlgebra commutant(const FiniteAlgebra& a, const Tolerance& tol) {
    FiniteAlgebra c;
    c.ambient_dim = a.ambient_dim;
    c.basis = commutation_nullspace(a.basis, a.ambient_dim, tol);
    return c;
}

FiniteAlgebra join(const FiniteAlgebra& a, const FiniteAlgebra& b, const Tolerance& tol) {
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("join: ambient dimension mismatch");
    std::vector<CMatrix> gens = a.basis;
    gens.insert(gens.end(), b.basis.begin(), b.basis.end());
    return generate(a.ambient_dim, gens, tol);
}

bool is_abelian(const FiniteAlgebra& a, const Tolerance& tol) {
    for (size_t i = 0; i < a.basis.size(); ++i)
        for (size_t j = i + 1; j < a.basis.size(); ++j) {
            CMatrix comm = a.basis[i] * a.basis[j] - a.basis[j] * a.basis[i];
            if (operator_norm(comm) > tol.residual_pass) return false;
        }
    return true;
}

double contains(const FiniteAlgebra& a, const CMatrix& x, const Tolerance& tol) {
    return subspace_residual(x, a.basis, tol);
}

double AlgebraCheck::max() const {
    return std::max(std::max(star_residual, product_residual),
                    std::max(identity_residual, orthonormality_residual));
}

AlgebraCheck check_algebra(const FiniteAlgebra& a, const Tolerance& tol) {
    AlgebraCheck out;
    for (size_t i = 0; i < a.basis.size(); ++i)
        for (size_t j = 0; j < a.basis.size(); ++j) {
            Complex p = trace_inner(a.basis[i], a.basis[j]);
            double expect = (i == j) ? 1.0 : 0.0;
            out.orthonormality_residual = std::max(out.orthonormality_residual, std::abs(p - expect));
        }
    for (const auto& b : a.basis)
        out.star_residual = std::max(out.star_residual, subspace_residual(b.adjoint(), a.basis, tol));
    for (const auto& x : a.basis)
        for (const auto& y : a.basis)
            out.product_residual = std::max(out.product_residual, subspace_residual(x * y, a.basis, tol));
    out.identity_residual = subspace_residual(a.identity(), a.basis, tol);
    return out;
}

double span_distance(const FiniteAlgebra& a, const FiniteAlgebra& b, const Tolerance& tol) {
    double r = 0.0;
    for (const auto& x : a.basis) r = std::max(r, subspace_residual(x, b.basis, tol));
    for (const auto& x : b.basis) r = std::max(r, subspace_residual(x, a.basis, tol));
    return r;
}

}  // namespace qfact
