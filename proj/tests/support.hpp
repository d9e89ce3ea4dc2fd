#pragma once

// Random operators and states for property tests.

#include "cfq/cfq.hpp"

#include <random>

namespace testing_support {

using namespace cfq;

inline cfq::CMatrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    cfq::CMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = cfq::Complex(n(rng), n(rng));
    return m;
}

inline cfq::Operator random_operator(Eigen::Index d, std::mt19937_64& rng) { return cfq::Operator(random_matrix(d, rng)); }

inline cfq::Operator random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
    const cfq::CMatrix m = random_matrix(d, rng);
    return cfq::Operator(0.5 * (m + m.adjoint()));
}

inline cfq::CVector random_ket(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    cfq::CVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cfq::Complex(n(rng), n(rng));
    return v.normalized();
}

/// Ginibre-distributed full-rank density matrix.
inline cfq::DensityMatrix random_state(Eigen::Index d, std::mt19937_64& rng) {
    const cfq::CMatrix g = random_matrix(d, rng);
    cfq::CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return cfq::DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Planted {
    Operator l;
    Operator h;
    CVector psi;
};

// Random (L, H) with psi planted as a common eigenvector of L and iH + L†L/2.
inline Planted plant_dark_state(Eigen::Index d, std::mt19937_64& rng) {
    const CVector psi = random_ket(d, rng);
    const CMatrix proj = psi * psi.adjoint();
    const CMatrix p_perp = CMatrix::Identity(d, d) - proj;
    const Complex lambda(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const CMatrix l0 = random_matrix(d, rng);
    const CMatrix l = l0 - (l0 * psi - lambda * psi) * psi.adjoint();

    const CVector half_llpsi = 0.5 * l.adjoint() * l * psi;
    const Complex mu = psi.dot(half_llpsi) + kI * uniform(rng, -1, 1);
    const CVector v = -kI * (mu * psi - half_llpsi);
    const CMatrix h0 = random_hermitian(d, rng).matrix();
    CMatrix h = p_perp * h0 * p_perp + v * psi.adjoint() + psi * v.adjoint() - psi.dot(v) * proj;
    h = 0.5 * (h + h.adjoint());
    return {Operator(l), Operator(h), psi};
}

}  // namespace testing_support
