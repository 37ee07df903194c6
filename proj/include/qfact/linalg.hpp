#ifndef QFACT_LINALG_HPP
#define QFACT_LINALG_HPP

#include <vector>

#include "qfact/types.hpp"

namespace qfact {

struct PsdFunctions {
    CMatrix sqrt;
    CMatrix pinv_sqrt;
    int rank = 0;
};

/// Square root and pseudo-inverse square root of a hermitian PSD matrix.
/// Eigenvalues above tol.rank_cut * lambda_max count toward the rank;
/// anything below is treated as the kernel.
PsdFunctions psd_functions(const CMatrix& m, const Tolerance& tol);

/// Orthonormal quotient of a spanning family with Gram matrix g.
/// embed maps spanning coefficients to coordinates in an orthonormal basis
/// of the quotient: (embed c1)^H (embed c2) == c1^H g c2.  kernel is an
/// orthonormal basis of the numerical null space of g.
struct GramQuotient {
    CMatrix embed;   // r x m
    CMatrix kernel;  // m x (m - r)
    int rank = 0;
};
GramQuotient gram_quotient(const CMatrix& g, const Tolerance& tol);

/// Orthonormal (trace inner product) basis of {x : x g == g x for all g}.
/// An empty generator list yields the full matrix basis of M_dim.
std::vector<CMatrix> commutation_nullspace(const std::vector<CMatrix>& gens,
                                           Eigen::Index dim, const Tolerance& tol);

/// Composition of two antilinear operators is linear: v -> a.mat conj(b.mat) v.
CMatrix anti_compose(const AntilinearOp& a, const AntilinearOp& b);

/// Adjoint of an antilinear operator: <a*(u), v> = <a(v), u>, i.e. transpose.
AntilinearOp anti_adjoint(const AntilinearOp& a);

/// Operator norm of x minus its projection onto the span of an orthonormal
/// (trace inner product) family.  Zero iff x lies in the span.
double subspace_residual(const CMatrix& x, const std::vector<CMatrix>& basis,
                         const Tolerance& tol);

// -- small helpers shared across modules --

/// a (linear) sandwiched between antilinear f on both sides: f o a o f, linear.
CMatrix anti_sandwich(const AntilinearOp& left, const CMatrix& a, const AntilinearOp& right);

/// Hermitian matrix power m^p through the eigendecomposition (p real).
CMatrix hermitian_power(const CMatrix& m, double p, const Tolerance& tol);

/// Unitary m^{it} for hermitian positive definite m.
CMatrix hermitian_imag_power(const CMatrix& m, double t, const Tolerance& tol);

/// Principal logarithm of a hermitian positive definite matrix.
CMatrix hermitian_log(const CMatrix& m, const Tolerance& tol);

/// Moore-Penrose pseudo-inverse via SVD with relative cutoff.
CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol);

/// Coefficients of x in an orthonormal family: c_k = <basis_k, x>.
CVector onb_coefficients(const CMatrix& x, const std::vector<CMatrix>& basis);

/// Linear combination sum_k c_k basis_k.
CMatrix onb_combine(const CVector& c, const std::vector<CMatrix>& basis);

}  // namespace qfact

#endif
