#pragma once

// Scalar and phase-space functionals of density matrices.

#include "cfq/basis.hpp"
#include "cfq/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace cfq {

/// <psi|rho|psi>, clamped to [0, 1].
inline double fidelity(const CVector& psi, const DensityMatrix& rho) {
    if (psi.size() != rho.dim()) {
        throw DimensionMismatch("fidelity: vector dim " + std::to_string(psi.size()) + " vs state dim " +
                                std::to_string(rho.dim()));
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw InvalidArgument("fidelity: target vector must be normalized");
    }
    const Complex f = psi.dot(rho.matrix() * psi);
    return std::clamp(f.real(), 0.0, 1.0);
}

/// Tr(rho^2)
inline double purity(const DensityMatrix& rho) {
    // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
    return (rho.matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
}

/// ½ Σ|eigenvalues of (a - b)|
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("trace_distance: dimensions differ");
    const CMatrix diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double expectation(const Operator& op, const DensityMatrix& rho) {
    if (op.dim() != rho.dim()) throw DimensionMismatch("expectation: dimensions differ");
    return (op.matrix() * rho.matrix()).trace().real();
}

/// Bloch vector in the [|e>, |g>] basis: rho = ½[[1+z, x-iy], [x+iy, 1-z]].
inline std::array<double, 3> bloch_vector(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw DimensionMismatch("bloch_vector: state must be a qubit");
    const Complex r01 = rho(0, 1);
    return {2.0 * r01.real(), -2.0 * r01.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

/// Rectangular grid of complex amplitudes alpha.
struct PhaseSpaceGrid {
    double re_min = -3.0;
    double re_max = 3.0;
    std::size_t n_re = 61;
    double im_min = -3.0;
    double im_max = 3.0;
    std::size_t n_im = 61;

    double re_at(std::size_t i) const { return axis(re_min, re_max, n_re, i); }
    double im_at(std::size_t j) const { return axis(im_min, im_max, n_im, j); }
    double cell_area() const {
        const double dre = n_re > 1 ? (re_max - re_min) / static_cast<double>(n_re - 1) : 0.0;
        const double dim = n_im > 1 ? (im_max - im_min) / static_cast<double>(n_im - 1) : 0.0;
        return dre * dim;
    }

private:
    static double axis(double lo, double hi, std::size_t n, std::size_t i) {
        return n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
    }
};

/// Q(alpha) sampled on a grid; values(i, j) sits at (re_at(i), im_at(j)).
struct QFunction {
    PhaseSpaceGrid grid;
    RMatrix values;

    /// Riemann sum of Q over the grid.
    double integral() const { return values.sum() * grid.cell_area(); }
};

inline double q_function_at(const DensityMatrix& rho, Complex alpha) {
    const Eigen::Index n = rho.dim();
    if (std::norm(alpha) > static_cast<double>(n) / 2.0) {
        throw TruncationUnsafe("q_function: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                               " exceeds half the Fock truncation " + std::to_string(n));
    }
    const CVector a = basis::fock::coherent(n, alpha);
    return std::max(0.0, a.dot(rho.matrix() * a).real()) / std::numbers::pi;
}

/// Husimi function Q(alpha) = <alpha|rho|alpha>/pi on a Fock-truncated state.
inline QFunction q_function(const DensityMatrix& rho, const PhaseSpaceGrid& grid) {
    QFunction q{grid, RMatrix(grid.n_re, grid.n_im)};
    for (std::size_t i = 0; i < grid.n_re; ++i)
        for (std::size_t j = 0; j < grid.n_im; ++j)
            q.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                q_function_at(rho, Complex(grid.re_at(i), grid.im_at(j)));
    return q;
}

}  // namespace cfq
