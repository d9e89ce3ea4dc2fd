#pragma once

// Single-mode linear (Gaussian) open systems: H = ½ xᵀGx, L = c1 q + c2 p,
// x = [q, p]ᵀ with [q, p] = i. Vacuum variance is 1/2.

#include "cfq/types.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cfq {

using CRow2 = Eigen::RowVector2cd;

/// Symplectic form [[0, 1], [-1, 0]].
inline Mat2 symplectic() {
    Mat2 s;
    s << 0.0, 1.0, -1.0, 0.0;
    return s;
}

struct GaussianModel {
    Mat2 g = Mat2::Zero();    // symmetric
    CRow2 c = CRow2::Zero();  // coupling coefficients (c1, c2)

    GaussianModel() = default;
    GaussianModel(const Mat2& g_in, const CRow2& c_in) : g(g_in), c(c_in) {
        if (g(0, 1) != g(1, 0)) throw InvalidArgument("GaussianModel: G must be symmetric");
    }
};

struct GaussianState {
    Vec2 mean = Vec2::Zero();
    Mat2 cov = 0.5 * Mat2::Identity();

    static GaussianState vacuum() { return {}; }

    /// Smallest eigenvalue of V + iΣ/2 (non-negative for physical states).
    double heisenberg_margin() const {
        Eigen::Matrix2cd m = cov.cast<Complex>() + 0.5 * kI * symplectic().cast<Complex>();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

struct LinearSystem {
    Mat2 a;  // drift
    Mat2 d;  // diffusion
};

/// A = Σ[G + Im(C†C)],  D = Σ Re(C†C) Σᵀ.
inline LinearSystem build_linear_system(const GaussianModel& model) {
    const Eigen::Matrix2cd cc = model.c.adjoint() * model.c;
    const Mat2 s = symplectic();
    return {s * (model.g + cc.imag()), s * cc.real() * s.transpose()};
}

/// Cascade of two linear couplings on the same mode:
/// C = C1 + C2 and the Hamiltonian picks up (L2†L1 - L1†L2)/(2i), whose
/// quadratic part is ½ xᵀ G_c x with G_c = -i (M + Mᵀ)/2,
/// M_jk = conj(c2_j) c1_k - conj(c1_j) c2_k. The c-number remainder is dropped.
inline GaussianModel linear_series_product(const GaussianModel& g1, const GaussianModel& g2) {
    Eigen::Matrix2cd m;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            m(j, k) = std::conj(g2.c(j)) * g1.c(k) - std::conj(g1.c(j)) * g2.c(k);
    const Eigen::Matrix2cd gc = -kI * 0.5 * (m + m.transpose());
    Mat2 g = g1.g + g2.g + gc.real();
    g(1, 0) = g(0, 1) = 0.5 * (g(0, 1) + g(1, 0));
    return GaussianModel(g, g1.c + g2.c);
}

inline bool is_hurwitz(const Mat2& a, double margin = 1e-12) {
    Eigen::EigenSolver<Mat2> es(a, false);
    return es.eigenvalues().real().maxCoeff() < -margin;
}

/// Solves A V + V Aᵀ + D = 0 for symmetric V (three unknowns Vqq, Vqp, Vpp).
inline Mat2 steady_covariance(const Mat2& a, const Mat2& d) {
    if (!is_hurwitz(a)) {
        throw NotHurwitz("steady_covariance: drift matrix is not Hurwitz, no unique steady covariance");
    }
    // Rows: (0,0), (0,1), (1,1) entries of A V + V Aᵀ.
    Eigen::Matrix3d m;
    m << 2.0 * a(0, 0), 2.0 * a(0, 1), 0.0,
         a(1, 0), a(0, 0) + a(1, 1), a(0, 1),
         0.0, 2.0 * a(1, 0), 2.0 * a(1, 1);
    const Eigen::Vector3d rhs(-d(0, 0), -0.5 * (d(0, 1) + d(1, 0)), -d(1, 1));
    const Eigen::Vector3d v = m.fullPivLu().solve(rhs);
    Mat2 out;
    out << v(0), v(1), v(1), v(2);
    return out;
}

inline double lyapunov_residual(const Mat2& a, const Mat2& d, const Mat2& v) {
    return (a * v + v * a.transpose() + d).cwiseAbs().maxCoeff();
}

/// Exact moment evolution: mean(t) = e^{At} mean0 and V from the vectorized
/// affine ODE dv/dt = (I⊗A + A⊗I) v + vec(D), via one augmented exponential per time.
inline std::vector<GaussianState> evolve_moments(const Mat2& a, const Mat2& d, const GaussianState& state0,
                                                 const std::vector<double>& t_grid) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > prev)) throw InvalidArgument("evolve_moments: time grid must be strictly increasing");
        prev = t;
    }
    Eigen::Matrix<double, 5, 5> aug = Eigen::Matrix<double, 5, 5>::Zero();
    const Mat2 id = Mat2::Identity();
    Eigen::Matrix4d gen;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gen.block<2, 2>(2 * i, 2 * j) = id(i, j) * a + a(i, j) * id;
    aug.topLeftCorner<4, 4>() = gen;
    aug.block<4, 1>(0, 4) = Eigen::Map<const Eigen::Vector4d>(d.data());

    Eigen::Matrix<double, 5, 1> v0;
    v0.head<4>() = Eigen::Map<const Eigen::Vector4d>(state0.cov.data());
    v0(4) = 1.0;

    std::vector<GaussianState> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const Eigen::Matrix<double, 5, 5> e = (aug * t).exp();
        const Eigen::Matrix<double, 5, 1> vt = e * v0;
        GaussianState s;
        s.mean = (a * t).exp() * state0.mean;
        s.cov = Eigen::Map<const Mat2>(vt.data());
        s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
        out.push_back(s);
    }
    return out;
}

/// Squeezing below vacuum in dB: -10 log10(λ_min(V) / ½).
inline double squeezing_db(const Mat2& v) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(v, Eigen::EigenvaluesOnly);
    return 0.0 - 10.0 * std::log10(es.eigenvalues().minCoeff() / 0.5);  // 0 - x keeps vacuum at +0
}

/// Tr(ρ²) = 1 / sqrt(4 det V) for a single-mode Gaussian state.
inline double gaussian_purity(const Mat2& v) { return 1.0 / std::sqrt(4.0 * v.determinant()); }

}  // namespace cfq
