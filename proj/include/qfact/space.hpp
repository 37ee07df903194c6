#ifndef QFACT_SPACE_HPP
#define QFACT_SPACE_HPP

#include <memory>
#include <optional>
#include <vector>

#include "qfact/algebra.hpp"

namespace qfact {

/// (M, phi): algebra plus faithful state phi(a) = Tr(density a), where the
/// density is itself an element of the algebra's span.
struct ProbabilitySpace {
    FiniteAlgebra algebra;
    CMatrix density;

    Complex phi(const CMatrix& a) const { return (density * a).trace(); }
};

/// Algebra in standard form: GNS data plus modular operators.  rep_algebra
/// acts on C^dim with omega cyclic and separating; pi lists the images of
/// the originating algebra's basis (identity images when the algebra was
/// already standard on its Hilbert space).
struct StandardSpace {
    Eigen::Index dim = 0;
    std::vector<CMatrix> pi;
    CVector omega;
    AntilinearOp J;
    CMatrix Delta;
    FiniteAlgebra rep_algebra;
    FiniteAlgebra commutant_algebra;
    std::optional<ProbabilitySpace> origin;

    /// State on the represented algebra.
    Complex phi(const CMatrix& x_rep) const {
        return omega.dot(x_rep * omega);
    }
    /// Transport an element of the originating algebra through pi.
    CMatrix to_rep(const CMatrix& ambient) const;
    /// Unique a with rep-span element a such that a * omega = h.
    CMatrix element_for_vector(const CVector& h) const;

    CMatrix vectorize;  // columns: rep_algebra.basis[k] * omega (invertible)
};

using SpacePtr = std::shared_ptr<const StandardSpace>;

/// Modular pair (J, Delta) of a concrete algebra with cyclic separating
/// vector, from the polar decomposition of S0 : a omega -> a* omega.
std::pair<AntilinearOp, CMatrix> modular_data(const std::vector<CMatrix>& basis,
                                              const CVector& omega, const Tolerance& tol);

/// GNS representation of (algebra, density); throws FaithfulnessError when
/// the state Gram matrix is rank deficient.
StandardSpace gns(const ProbabilitySpace& p, const Tolerance& tol);
SpacePtr gns_ptr(const ProbabilitySpace& p, const Tolerance& tol);

/// Standard form of an algebra already acting on its Hilbert space with a
/// given cyclic separating vector (commutants, R on L, tensor squares).
StandardSpace standard_space(const FiniteAlgebra& a, const CVector& omega, const Tolerance& tol);
SpacePtr standard_space_ptr(const FiniteAlgebra& a, const CVector& omega, const Tolerance& tol);

/// sigma_t applied to an ambient algebra element, computed on the GNS side
/// and pulled back; throws when the result drifts out of the algebra.
CMatrix modular_flow(const StandardSpace& s, double t, const CMatrix& a, const Tolerance& tol);

/// sigma_t on the represented algebra itself.
CMatrix modular_flow_rep(const StandardSpace& s, double t, const CMatrix& x_rep, const Tolerance& tol);

/// Residual battery for the standard-form invariants (J Omega = Omega,
/// Delta Omega = Omega, J^2 = 1, J Delta J = Delta^{-1}, J M J = M').
struct StandardSpaceCheck {
    double j_omega = 0.0;
    double delta_omega = 0.0;
    double j_involution = 0.0;
    double j_delta_j = 0.0;
    double j_commutant = 0.0;
    double kms_boundary = 0.0;
    double max() const;
};
StandardSpaceCheck check_standard_space(const StandardSpace& s, const Tolerance& tol);

}  // namespace qfact

#endif
