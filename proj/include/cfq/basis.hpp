#pragma once

// Standard operators in the conventions used by the models:
//   qubit  basis [|e>, |g>] = [[1,0]^T, [0,1]^T]
//   qutrit basis [|1>, |2>, |3>]
//   Fock   basis |0>, ..., |N-1>

#include "cfq/operator.hpp"

#include <cmath>

namespace cfq::basis {

inline CVector ket(Eigen::Index dim, Eigen::Index index) {
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

/// |col><row| style transition |to><from|.
inline Operator transition(Eigen::Index dim, Eigen::Index to, Eigen::Index from) {
    CMatrix m = CMatrix::Zero(dim, dim);
    m(to, from) = 1.0;
    return Operator(std::move(m));
}

inline Operator projector(const CVector& psi) { return Operator(psi * psi.adjoint()); }

namespace qubit {
inline constexpr Eigen::Index kExcited = 0;
inline constexpr Eigen::Index kGround = 1;

inline CVector excited() { return ket(2, kExcited); }
inline CVector ground() { return ket(2, kGround); }
inline Operator sigma_z() { return Operator(CMatrix(Eigen::Vector2cd(1.0, -1.0).asDiagonal())); }
/// sigma_- = |g><e|
inline Operator sigma_minus() { return transition(2, kGround, kExcited); }
inline Operator sigma_plus() { return sigma_minus().adjoint(); }
}  // namespace qubit

namespace fock {

/// Truncated annihilation operator, a|n> = sqrt(n)|n-1>.
inline Operator annihilation(Eigen::Index n_levels) {
    CMatrix m = CMatrix::Zero(n_levels, n_levels);
    for (Eigen::Index n = 1; n < n_levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return Operator(std::move(m));
}

inline Operator number(Eigen::Index n_levels) {
    CMatrix m = CMatrix::Zero(n_levels, n_levels);
    for (Eigen::Index n = 0; n < n_levels; ++n) m(n, n) = static_cast<double>(n);
    return Operator(std::move(m));
}

/// q = (a + a^dagger)/sqrt(2)
inline Operator position(Eigen::Index n_levels) {
    const Operator a = annihilation(n_levels);
    return (1.0 / std::sqrt(2.0)) * (a + a.adjoint());
}

/// p = (a - a^dagger)/(i sqrt(2))
inline Operator momentum(Eigen::Index n_levels) {
    const Operator a = annihilation(n_levels);
    return Complex(0.0, -1.0 / std::sqrt(2.0)) * (a - a.adjoint());
}

/// Truncated coherent state; amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!).
inline CVector coherent(Eigen::Index n_levels, Complex alpha) {
    CVector v(n_levels);
    Complex amp = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index n = 0; n < n_levels; ++n) {
        v(n) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

}  // namespace fock

}  // namespace cfq::basis
