#ifndef QFACT_STINESPRING_HPP
#define QFACT_STINESPRING_HPP

#include <map>
#include <string>

#include "qfact/channel.hpp"

namespace qfact {

/// The quotient dilation of a stochastic map Psi: src -> tgt.  L is the
/// quotient of (src rep basis) (x) (tgt GNS basis) by the null space of the
/// semi-inner product <A (x) h, X (x) k> = <h, Psi(A*X) k>; spanning order
/// is lexicographic with the algebra index major.
struct StinespringData {
    StochasticMap channel;
    Eigen::Index L_dim = 0;
    CMatrix embed;        // L_dim x (m*d)
    CMatrix kernel;       // (m*d) x (m*d - L_dim)
    CMatrix embed_pinv;   // (m*d) x L_dim
    std::vector<CMatrix> sigma;  // per source rep basis element
    std::vector<CMatrix> tau;    // per target commutant basis element
    CMatrix V;            // L_dim x d (isometry)
    CMatrix Lambda;       // L_dim x d_src (isometry for stochastic maps)
    CVector omega_phi;    // 1 (x) Omega_tgt
    double sigma_welldef = 0.0;
    double tau_welldef = 0.0;

    Eigen::Index span_count() const { return embed.cols(); }
    /// Quotient image of a spanning coefficient vector.
    CVector embed_coeff(const CVector& c) const { return embed * c; }
    /// Coefficient vector of A (x) h over the spanning family.
    CVector span_coeff(const CMatrix& a_rep, const CVector& h) const;
    /// sigma extended linearly to the source rep span.
    CMatrix sigma_of(const CMatrix& a_rep) const;
};

StinespringData dilate(const StochasticMap& psi, const Tolerance& tol);

/// tau at an arbitrary commutant element; validates membership first.
CMatrix tau_of(const StinespringData& d, const CMatrix& y, const Tolerance& tol);

/// One row per Stinespring relation; the table is the module's main
/// verification artifact.  st5 rows appear only for Markov channels.
struct RelationReport {
    std::vector<std::pair<std::string, double>> rows;
    void add(const std::string& name, double residual) { rows.emplace_back(name, residual); }
    double max_residual() const;
    double at(const std::string& name) const;
};
RelationReport verify_relations(const StinespringData& d, const Tolerance& tol);

/// Anti-unitary W: L_{Phi#} -> L_{Phi'} with
/// W (X (x) h) = J2 X J2 (x) J1 h, plus both dilations it connects.
struct WData {
    AntilinearOp w;
    StinespringData dil_sharp;
    StinespringData dil_prime;
    double antiunitary_residual = 0.0;
    double welldef_residual = 0.0;
    double tau_conjugation = 0.0;    // W* tau_{Phi'}(A1) W = tau_{Phi#}(J1 A1 J1)
    double sigma_conjugation = 0.0;  // W* sigma_{Phi'}(Y2) W = sigma_{Phi#}(J2 Y2 J2)
};
WData w_antiunitary(const StochasticMap& phi, const Tolerance& tol);

}  // namespace qfact

#endif
