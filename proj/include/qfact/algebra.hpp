#ifndef QFACT_ALGEBRA_HPP
#define QFACT_ALGEBRA_HPP

#include <vector>

#include "qfact/linalg.hpp"
#include "qfact/types.hpp"

namespace qfact {

/// A unital *-closed subalgebra of M_n(C), stored as an orthonormal basis
/// under the trace inner product.  The basis keeps the order in which
/// elements were first produced by generate(), so fixtures written in terms
/// of matrix units stay readable.
struct FiniteAlgebra {
    Eigen::Index ambient_dim = 0;
    std::vector<CMatrix> basis;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
    CMatrix identity() const { return CMatrix::Identity(ambient_dim, ambient_dim); }

    CVector coefficients(const CMatrix& x) const { return onb_coefficients(x, basis); }
    CMatrix element(const CVector& c) const { return onb_combine(c, basis); }
    CMatrix project(const CMatrix& x) const { return element(coefficients(x)); }
};

/// Smallest unital *-algebra containing the generators.  Alternates
/// adjoints and pairwise products with stable Gram-Schmidt until the span
/// stops growing; terminates because dim <= n^2.
FiniteAlgebra generate(Eigen::Index ambient_dim, const std::vector<CMatrix>& gens,
                       const Tolerance& tol);

/// {x : [x, b] = 0 for every basis element}.
FiniteAlgebra commutant(const FiniteAlgebra& a, const Tolerance& tol);

/// Algebra generated by the union of the two bases.
FiniteAlgebra join(const FiniteAlgebra& a, const FiniteAlgebra& b, const Tolerance& tol);

bool is_abelian(const FiniteAlgebra& a, const Tolerance& tol);

/// Membership residual of x in the span of a (operator norm).
double contains(const FiniteAlgebra& a, const CMatrix& x, const Tolerance& tol);

/// Structural residuals: star closure, product closure, identity membership.
struct AlgebraCheck {
    double star_residual = 0.0;
    double product_residual = 0.0;
    double identity_residual = 0.0;
    double orthonormality_residual = 0.0;

    double max() const;
};
AlgebraCheck check_algebra(const FiniteAlgebra& a, const Tolerance& tol);

/// Largest mutual span residual between a and b; zero iff equal spans.
double span_distance(const FiniteAlgebra& a, const FiniteAlgebra& b, const Tolerance& tol);

}  // namespace qfact

#endif
