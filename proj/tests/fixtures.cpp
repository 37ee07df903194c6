#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <unsupported/Eigen/KroneckerProduct>

namespace qfact::fixtures {

CMatrix unit(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
    CMatrix e = CMatrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

CMatrix pauli_x() {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

CMatrix pauli_z() {
    CMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

CMatrix hadamard() {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

ProbabilitySpace full_matrix_space(Eigen::Index n, const CMatrix& density) {
    std::vector<CMatrix> gens;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) gens.push_back(unit(i, j, n));
    ProbabilitySpace p;
    p.algebra = generate(n, gens, Tolerance{});
    p.density = density;
    return p;
}

ProbabilitySpace diagonal_space(const Eigen::VectorXd& p) {
    const Eigen::Index n = p.size();
    std::vector<CMatrix> gens;
    for (Eigen::Index i = 0; i < n; ++i) gens.push_back(unit(i, i, n));
    ProbabilitySpace ps;
    ps.algebra = generate(n, gens, Tolerance{});
    ps.density = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) ps.density(i, i) = p(i);
    return ps;
}

ProbabilitySpace tensor_square_space() {
    return full_matrix_space(4, CMatrix::Identity(4, 4) / 4.0);
}

SpacePtr m2_trace(const Tolerance& tol) {
    return gns_ptr(full_matrix_space(2, CMatrix::Identity(2, 2) / 2.0), tol);
}

SpacePtr m2_state(double p0, const Tolerance& tol) {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = p0;
    rho(1, 1) = 1.0 - p0;
    return gns_ptr(full_matrix_space(2, rho), tol);
}

namespace {

StochasticMap from_ambient_images(SpacePtr src, SpacePtr tgt,
                                  const std::vector<CMatrix>& imgs, const Tolerance& tol) {
    return make_map_ambient(std::move(src), std::move(tgt), imgs, tol);
}

}  // namespace

StochasticMap identity_channel(SpacePtr s, const Tolerance& tol) {
    std::vector<CMatrix> imgs = s->origin->algebra.basis;
    return from_ambient_images(s, s, imgs, tol);
}

StochasticMap adu_channel(SpacePtr s, const CMatrix& u, const Tolerance& tol) {
    std::vector<CMatrix> imgs;
    for (const auto& b : s->origin->algebra.basis) imgs.push_back(u * b * u.adjoint());
    return from_ambient_images(s, s, imgs, tol);
}

StochasticMap depolarizing_channel(SpacePtr s, double lambda, const Tolerance& tol) {
    const Eigen::Index n = s->origin->algebra.ambient_dim;
    std::vector<CMatrix> imgs;
    for (const auto& b : s->origin->algebra.basis)
        imgs.push_back((1.0 - lambda) * b +
                       lambda * (b.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n));
    return from_ambient_images(s, s, imgs, tol);
}

StochasticMap flip_average_channel(double p0, const Tolerance& tol) {
    SpacePtr src = m2_trace(tol);
    SpacePtr tgt = m2_state(p0, tol);
    CMatrix x = pauli_x();
    std::vector<CMatrix> imgs;
    for (const auto& b : src->origin->algebra.basis) imgs.push_back(0.5 * (b + x * b * x));
    return from_ambient_images(src, tgt, imgs, tol);
}

StochasticMap tensor_embedding_channel(const Tolerance& tol) {
    SpacePtr src = m2_trace(tol);
    SpacePtr tgt = gns_ptr(tensor_square_space(), tol);
    const CMatrix id2 = CMatrix::Identity(2, 2);
    std::vector<CMatrix> imgs;
    for (const auto& b : src->origin->algebra.basis)
        imgs.push_back(Eigen::kroneckerProduct(b, id2).eval());
    return from_ambient_images(src, tgt, imgs, tol);
}

StochasticMap classical_channel(const Eigen::MatrixXd& t, const Eigen::VectorXd& p,
                                const Tolerance& tol) {
    const Eigen::Index n = p.size();
    SpacePtr s = gns_ptr(diagonal_space(p), tol);
    // Phi(e_j) = sum_i T_ij e_i on indicator functions
    std::vector<CMatrix> imgs;
    for (const auto& b : s->origin->algebra.basis) {
        CMatrix img = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index jj = 0; jj < n; ++jj) img(i, i) += t(i, jj) * b(jj, jj);
        imgs.push_back(img);
    }
    return from_ambient_images(s, s, imgs, tol);
}

double Coupling::moment(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < pi.rows(); ++i)
        for (Eigen::Index j = 0; j < pi.cols(); ++j) acc += pi(i, j) * f(i) * g(j);
    return acc;
}

Coupling classical_coupling(const Eigen::MatrixXd& t, const Eigen::VectorXd& p) {
    Coupling c;
    c.pi = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j) c.pi(i, j) = p(i) * t(i, j);
    for (Eigen::Index i = 0; i < c.pi.rows(); ++i)
        for (Eigen::Index j = 0; j < c.pi.cols(); ++j)
            if (c.pi(i, j) > 1e-12) ++c.atoms;
    return c;
}

Eigen::MatrixXd random_reversible_chain(Eigen::Index n, std::mt19937_64& rng) {
    // convex combination of symmetrized permutation matrices: exactly
    // doubly stochastic and symmetric, so the uniform distribution is
    // stationary and the chain is reversible
    std::uniform_real_distribution<double> uni(0.2, 1.0);
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n) * uni(rng);
    for (int k = 0; k < 4; ++k) {
        std::shuffle(idx.begin(), idx.end(), rng);
        double c = uni(rng);
        for (Eigen::Index i = 0; i < n; ++i) {
            w(i, idx[static_cast<size_t>(i)]) += 0.5 * c;
            w(idx[static_cast<size_t>(i)], i) += 0.5 * c;
        }
    }
    double total = w.row(0).sum();
    return w / total;
}

StochasticMap random_markov_map(double p0, std::mt19937_64& rng, const Tolerance& tol) {
    SpacePtr s = m2_state(p0, tol);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> wdist(0.2, 0.8);
    double w = wdist(rng);
    CMatrix u1 = CMatrix::Zero(2, 2), u2 = CMatrix::Zero(2, 2);
    u1(0, 0) = std::exp(Complex(0, uni(rng)));
    u1(1, 1) = std::exp(Complex(0, uni(rng)));
    u2(0, 0) = std::exp(Complex(0, uni(rng)));
    u2(1, 1) = std::exp(Complex(0, uni(rng)));
    std::vector<CMatrix> imgs;
    for (const auto& b : s->origin->algebra.basis)
        imgs.push_back(w * (u1 * b * u1.adjoint()) + (1.0 - w) * (u2 * b * u2.adjoint()));
    return from_ambient_images(s, s, imgs, tol);
}

StochasticMap random_nonmarkov_map(std::mt19937_64& rng, const Tolerance& tol) {
    std::uniform_real_distribution<double> pdist(0.55, 0.9);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    double p0 = pdist(rng);
    SpacePtr src = m2_trace(tol);
    SpacePtr tgt = m2_state(p0, tol);
    // anti-diagonal unitary keeps (rho + u rho u*)/2 = 1/2 for diagonal rho
    CMatrix u = CMatrix::Zero(2, 2);
    u(0, 1) = std::exp(Complex(0, uni(rng)));
    u(1, 0) = std::exp(Complex(0, uni(rng)));
    std::vector<CMatrix> imgs;
    for (const auto& b : src->origin->algebra.basis) imgs.push_back(0.5 * (b + u * b * u.adjoint()));
    return from_ambient_images(src, tgt, imgs, tol);
}

}  // namespace qfact::fixtures
