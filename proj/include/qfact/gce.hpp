#ifndef QFACT_GCE_HPP
#define QFACT_GCE_HPP

#include "qfact/factorize.hpp"

namespace qfact {

/// Trace standard representation of R: GNS at the normalized ambient trace,
/// with the natural positive cone described by its generating family
/// { pi(a) J_s pi(a) Omega_tau }.
struct StandardFormData {
    StandardSpace space;  // pi_s, J_s, Omega_tau live here
    std::vector<CVector> cone_gens;

    const AntilinearOp& Js() const { return space.J; }
    /// GNS class of an element of R.
    CVector vector_of(const CMatrix& element) const {
        return space.to_rep(element) * space.omega;
    }
};
StandardFormData standard_form(const FiniteAlgebra& r, const Tolerance& tol);

/// Unique cone vector implementing a state on R, computed as the class of
/// the square root of the trace-dual density.
struct ConeVector {
    CVector xi;
    CMatrix density;           // W_omega in the span of R
    double state_residual = 0.0;    // omega(X) = <xi, pi(X) xi>
    double cone_pairing = 0.0;      // most negative pairing against cone_gens
    double density_membership = 0.0;
};
ConeVector cone_vector(const StandardFormData& sf, const FiniteAlgebra& r,
                       const CVector& omega_on_basis, const Tolerance& tol);

/// nabla_1 A1 Omega1 = pi_s(beta(A1)) xi, nabla_2 A2 Omega2 = pi_s(sigma(A2)) xi.
struct Nablas {
    Isometry nabla1;
    Isometry nabla2;
};
Nablas nablas(const SharpDilation& sd, const std::vector<CMatrix>& beta,
              const StandardFormData& sf, const CVector& xi, const Tolerance& tol);

/// Generalized conditional expectation E(X) = J_i nabla* J_s pi_s(X) J_s nabla J_i,
/// returned as images of the R basis.
std::vector<CMatrix> gce_map(const StandardFormData& sf, const CMatrix& nabla,
                             const AntilinearOp& j_i, const FiniteAlgebra& r);

/// || J_s nabla - nabla J_i ||.
double cce_check(const CMatrix& nabla, const AntilinearOp& js, const AntilinearOp& ji);

/// The full section 5 battery for one (Phi, Jhat) pair.
struct GceReport {
    FiniteAlgebra R;
    double cce1 = 0.0;
    double cce2 = 0.0;
    bool cce_pass = false;

    double nabla1_isometry = 0.0;
    double nabla2_isometry = 0.0;

    // E_i sanity: range membership, unitality, cp defect, expectation value
    double e1_range = 0.0, e2_range = 0.0;
    double e1_unital = 0.0, e2_unital = 0.0;
    double e1_cp = 0.0, e2_cp = 0.0;
    double e1_expectation = 0.0, e2_expectation = 0.0;

    // E_i o inclusion = id (holds iff CCE)
    double e1_beta_identity = 0.0;   // E1(beta(A1)) = A1
    double e2_sigma_identity = 0.0;  // E2(sigma(A2)) = A2

    // Remark 1: CCE  <=>  E1 = V* . V and E2 = Lambda* . Lambda
    double remark1_e1 = 0.0;
    double remark1_e2 = 0.0;
    bool remark1_forward = false;   // CCE pass implies map equality
    bool remark1_backward = false;  // map equality implies CCE pass
    bool remark1_biconditional = false;

    // Proposition 5
    bool omega_separating = false;
    double separating_witness = 0.0;
    double prop5_grid1 = 0.0;  // <Omega#, R beta(A1) Omega#> = <Omega1, E1(R) A1 Omega1>
    double prop5_grid2 = 0.0;  // <Omega#, R sigma(A2) Omega#> = <Omega2, E2(R) A2 Omega2>

    // Corollary 1
    double corollary_sharp = 0.0;  // Phi#(A2) = beta#(alpha(A2))

    // the isometry Xi and its J_s intertwining consequence
    double xi_isometry = 0.0;
    double xi_welldef = 0.0;
    double xi_v_nabla1 = 0.0;      // Xi V = nabla1
    double xi_lambda_nabla2 = 0.0; // Xi Lambda = nabla2
    double xi_jhat = 0.0;          // Jhat V = Xi* J_s Xi V

    std::optional<FactorizationCertificate> certificate;
};
GceReport gce_factorization(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol);

}  // namespace qfact

#endif
