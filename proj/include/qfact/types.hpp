#ifndef QFACT_TYPES_HPP
#define QFACT_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qfact {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical policy shared by every construction in the library.
/// rank_cut is relative to the largest eigenvalue of the matrix at hand;
/// residual_pass is the operator-norm threshold below which an identity
/// is accepted.
struct Tolerance {
    double rank_cut = 1e-9;
    double residual_pass = 1e-8;

    void validate() const {
        if (!(rank_cut > 0.0) || !(rank_cut < 1.0))
            throw std::invalid_argument("Tolerance: rank_cut must lie in (0,1)");
        if (!(residual_pass > 0.0))
            throw std::invalid_argument("Tolerance: residual_pass must be positive");
    }
};

/// Antilinear operator on C^n, fixed convention: v |-> mat * conj(v).
/// All modular conjugations (J, J_1, J_2, J_s, Jhat, W) use this type.
struct AntilinearOp {
    CMatrix mat;

    CVector apply(const CVector& v) const { return mat * v.conjugate(); }
    Eigen::Index dim() const { return mat.rows(); }
};

/// Linear map with isometric column structure (V, nabla_i, Xi).
struct Isometry {
    CMatrix mat;
    double defect = 0.0;  // ||mat^H mat - I||

    Eigen::Index source_dim() const { return mat.cols(); }
    Eigen::Index target_dim() const { return mat.rows(); }
};

struct FaithfulnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CyclicityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spectral norm, the norm used in every residual report.
double operator_norm(const CMatrix& m);

/// Trace inner product <a,b> = Tr(a^H b).
inline Complex trace_inner(const CMatrix& a, const CMatrix& b) {
    return (a.adjoint() * b).trace();
}

}  // namespace qfact

#endif
