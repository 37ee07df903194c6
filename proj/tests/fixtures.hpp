#ifndef QFACT_TESTS_FIXTURES_HPP
#define QFACT_TESTS_FIXTURES_HPP

#include <random>
#include <vector>

#include "qfact/channel.hpp"

namespace qfact::fixtures {

CMatrix unit(Eigen::Index i, Eigen::Index j, Eigen::Index n);
CMatrix pauli_x();
CMatrix pauli_z();
CMatrix hadamard();

/// Full matrix algebra M_n with a given density; basis = matrix units.
ProbabilitySpace full_matrix_space(Eigen::Index n, const CMatrix& density);
/// Diagonal (classical) algebra with distribution p; basis = diagonal units.
ProbabilitySpace diagonal_space(const Eigen::VectorXd& p);
/// M_2 (x) M_2 inside M_4 with the normalized trace.
ProbabilitySpace tensor_square_space();

SpacePtr m2_trace(const Tolerance& tol);
SpacePtr m2_state(double p0, const Tolerance& tol);  // density diag(p0, 1-p0)

StochasticMap identity_channel(SpacePtr s, const Tolerance& tol);
StochasticMap adu_channel(SpacePtr s, const CMatrix& u, const Tolerance& tol);
/// (1-lambda) A + lambda tr(A)/n 1 on a tracial space.
StochasticMap depolarizing_channel(SpacePtr s, double lambda, const Tolerance& tol);
/// A -> (A + X A X)/2 from (M2, trace) into (M2, diag(p0, 1-p0)).
StochasticMap flip_average_channel(double p0, const Tolerance& tol);
/// A -> A (x) 1 from (M2, trace) into (M4, trace).
StochasticMap tensor_embedding_channel(const Tolerance& tol);
/// Classical chain: row-stochastic T with stationary p, both spaces (diag, p).
StochasticMap classical_channel(const Eigen::MatrixXd& t, const Eigen::VectorXd& p,
                                const Tolerance& tol);

/// Brute-force classical coupling pi(i,j) = p_i T_ij for the abelian oracle.
struct Coupling {
    Eigen::MatrixXd pi;   // n x n joint distribution
    int atoms = 0;        // entries above threshold
    double moment(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
};
Coupling classical_coupling(const Eigen::MatrixXd& t, const Eigen::VectorXd& p);

/// Random row-stochastic matrix with uniform stationary distribution
/// (symmetrized), used by the abelian acceptance fixture.
Eigen::MatrixXd random_reversible_chain(Eigen::Index n, std::mt19937_64& rng);

/// Mixture of diagonal-unitary conjugations on (M2, diag(p0,1-p0)):
/// commutes with the modular flow, hence Markov.
StochasticMap random_markov_map(double p0, std::mt19937_64& rng, const Tolerance& tol);
/// Flip-average with a random phase twist into a random non-tracial state:
/// stochastic but never Markov.
StochasticMap random_nonmarkov_map(std::mt19937_64& rng, const Tolerance& tol);

}  // namespace qfact::fixtures

#endif
