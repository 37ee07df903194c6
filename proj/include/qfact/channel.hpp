#ifndef QFACT_CHANNEL_HPP
#define QFACT_CHANNEL_HPP

#include <memory>
#include <optional>
#include <vector>

#include "qfact/space.hpp"

namespace qfact {

struct FlagReport {
    bool ok = false;
    double residual = 0.0;
};

/// Linear map between standard spaces, stored as images of the source
/// represented basis.  Flags are computed, never assumed; non-examples are
/// legitimate values (callers study maps that fail cp or preservation).
struct StochasticMap {
    SpacePtr source;
    SpacePtr target;
    std::vector<CMatrix> action;  // action[k] = Phi(source rep basis[k]) on target GNS space

    FlagReport unital;
    FlagReport cp;
    FlagReport state_preserving;

    bool stochastic() const { return unital.ok && cp.ok && state_preserving.ok; }
    CMatrix apply(const CMatrix& x_rep) const;
};

/// Build a map from images of the source represented basis and compute the
/// unital / cp / state-preserving flags.  Normality is automatic in finite
/// dimension.  Throws only on shape mismatch; failed flags are data.
StochasticMap make_map(SpacePtr source, SpacePtr target,
                       const std::vector<CMatrix>& action_on_rep_basis, const Tolerance& tol);

/// Same map specified on the originating (ambient) algebra basis.
StochasticMap make_map_ambient(SpacePtr source, SpacePtr target,
                               const std::vector<CMatrix>& images_of_ambient_basis,
                               const Tolerance& tol);

StochasticMap compose(const StochasticMap& outer, const StochasticMap& inner, const Tolerance& tol);

/// The GNS contraction U_Phi: U pi1(a) Omega1 = pi2(Phi(a)) Omega2.
CMatrix contraction_u(const StochasticMap& phi);

/// Candidate (phi1,phi2)-adjoint from the duality linear system
/// phi2(B Phi(A)) = phi1(Phi#(B) A); the candidate is always unital and
/// state-preserving, so validity reduces to complete positivity
/// (Proposition 1: valid iff Phi is Markov).
struct AdjointReport {
    StochasticMap sharp;
    bool valid = false;
    double cp_residual = 0.0;
};
AdjointReport adjoint_sharp(const StochasticMap& phi, const Tolerance& tol);

/// The three equivalent Markov conditions evaluated independently:
///   (i)  the adjoint candidate is a stochastic map,
///   (ii) Phi intertwines the modular flows (checked on log Delta, plus
///        sampled t in {+-1, +-1/2, 1/3}),
///   (iii) J2 U = U J1.
struct MarkovReport {
    FlagReport cond_adjoint;
    FlagReport cond_modular;
    FlagReport cond_j;
    bool agree = false;
    bool markov = false;
    double residual() const;
};
MarkovReport markov_check(const StochasticMap& phi, const Tolerance& tol);

/// Dual map Phi'(Y) = J1 Phi#(J2 Y J2) J1 between the commutant spaces.
StochasticMap dual_prime(const StochasticMap& phi, const Tolerance& tol);

/// Tensor-square factorization of a state: alpha(a) = pi(a) (x) 1,
/// beta(a) = 1 (x) pi(a) into (pi(M) (x) pi(M), Omega (x) Omega).
struct TensorFactorization {
    SpacePtr tensor_space;
    StochasticMap alpha;
    StochasticMap beta;
    double alpha_sharp_formula = 0.0;  // alpha#(A (x) B) = <Omega, B Omega> A
    double beta_sharp_formula = 0.0;   // beta#(A (x) B) = <Omega, A Omega> B
    double beta_sharp_alpha = 0.0;     // beta#(alpha(a)) = phi(a) 1
};
TensorFactorization tensor_state_factorization(const ProbabilitySpace& p, const Tolerance& tol);

}  // namespace qfact

#endif
