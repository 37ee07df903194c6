#ifndef QFACT_FACTORIZE_HPP
#define QFACT_FACTORIZE_HPP

#include <map>
#include <optional>
#include <string>

#include "qfact/stinespring.hpp"

namespace qfact {

enum class JhatProvenance { deterministic_canonical, abelian_w, user_supplied };

const char* to_string(JhatProvenance p);

/// Candidate anti-unitary on L_{Phi#}.  Residuals are computed, not
/// assumed: a wrong candidate is a representable value whose certificate
/// comes back invalid.
struct JHat {
    AntilinearOp op;
    JhatProvenance provenance = JhatProvenance::user_supplied;
    double antiunitary_residual = 0.0;
    double involution_residual = 0.0;
    double antiunij_residual = 0.0;  // || Jhat V - V J1 ||
    std::map<std::string, double> extras;

    bool admissible(const Tolerance& tol) const {
        return antiunitary_residual <= tol.residual_pass && antiunij_residual <= tol.residual_pass;
    }
};

/// Everything hanging off the adjoint: Phi, Phi#, and the dilation of Phi#
/// that the whole of sections 3-5 works on.
struct SharpDilation {
    StochasticMap phi;
    StochasticMap sharp;
    StinespringData dil;
};
SharpDilation make_sharp_dilation(const StochasticMap& phi, const Tolerance& tol);

/// Max over basis pairs of ||Phi(AB) - Phi(A) Phi(B)||.
double multiplicativity_residual(const StochasticMap& phi);

/// Wrap a user-supplied candidate matrix (convention: v -> mat conj(v))
/// and compute its defining residuals against the dilation.
JHat make_jhat(const SharpDilation& sd, const CMatrix& mat, JhatProvenance prov,
               const Tolerance& tol);

/// Canonical Jhat for a deterministic map, assembled from
/// Jhat* (A2 (x) h1) = Lambda J2 A2 U_Phi h1.
JHat jhat_deterministic(const SharpDilation& sd, const Tolerance& tol);

/// Canonical Jhat in the abelian case: the anti-unitary W under the
/// identification L_{Phi'} = L_{Phi#} (Phi# = Phi' for maximal abelian
/// algebras in standard form).
JHat jhat_abelian(const SharpDilation& sd, const Tolerance& tol);

/// The algebra R generated by sigma(M2) and Jhat* tau(M1') Jhat.
FiniteAlgebra build_R(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol);

struct FactorizationCertificate {
    FiniteAlgebra R;
    std::vector<CMatrix> alpha;  // images of the M2 rep basis (= sigma)
    std::vector<CMatrix> beta;   // images of the M1 rep basis
    CVector omega;               // Omega_{Phi#}

    double cond1_a = 0.0;  // V* R V in M1
    double cond1_b = 0.0;  // Lambda* R Lambda in M2
    bool omega_separating = false;
    double separating_witness = 0.0;  // smallest singular value of T -> T omega on R
    bool omega_cyclic = false;
    double reconstruction_residual = 0.0;        // Phi = alpha# o beta
    double reconstruction_residual_sharp = 0.0;  // Phi# = beta# o alpha
    double alpha_multiplicative = 0.0;
    double beta_multiplicative = 0.0;
    double state_transport = 0.0;  // omega(alpha(B)) = phi2(B), omega(beta(A)) = phi1(A)
    bool valid = false;
    bool minimal = false;
    double minimal_residual = 0.0;
    std::map<std::string, double> extras;
};

/// Proposition 4: check (cond1) over a basis of R; on success assert that
/// Omega_{Phi#} separates R, build alpha = sigma and
/// beta = Jhat* tau(J1 . J1) Jhat, and verify both reconstructions.
/// (cond1) failing yields an invalid certificate with the offending
/// residuals; the proposition is one-directional, so nothing is claimed
/// about non-factorizability.
FactorizationCertificate certify(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol);

/// Proposition 3 route for multiplicative maps: alpha = sigma_{Phi#},
/// beta = Theta = sigma_{Phi#} o Phi, R = sigma(M2).
FactorizationCertificate deterministic_factorize(const StochasticMap& phi, const Tolerance& tol);

struct SufficientCheck {
    bool ok = false;
    double jhat_lambda = 0.0;      // || Jhat Lambda - Lambda J2 ||
    double sigma_in_beta_comm = 0.0;
    double product_lambda = 0.0;   // Lambda* sigma(A2) Jhat* tau(Y1) Jhat Lambda = A2 Phi(J1 Y1 J1)
    double product_v = 0.0;        // V* sigma(A2) Jhat* tau(Y1) Jhat V = Phi#(A2) J1 Y1 J1
};
SufficientCheck sufficient_check(const SharpDilation& sd, const JHat& jhat,
                                 const std::vector<CMatrix>& beta, const Tolerance& tol);

bool minimality_check(const FactorizationCertificate& cert, const Tolerance& tol);

/// beta(A1) = Jhat* tau_{Phi#}(J1 A1 J1) Jhat over the M1 rep basis.
std::vector<CMatrix> beta_images(const SharpDilation& sd, const JHat& jhat, const Tolerance& tol);

}  // namespace qfact

#endif
