#pragma once

// SLH description of single-channel open systems and their cascade
// composition. Only a scalar scattering coefficient is supported.

#include "cfq/operator.hpp"

#include <cmath>
#include <string>

namespace cfq {

inline constexpr double kTolUnitModulus = 1e-10;

/// (s, L, H) for a system driven by one probe field.
class SLHTriple {
public:
    SLHTriple(Complex s, Operator l, Operator h) : s_(s), l_(std::move(l)), h_(std::move(h)) {
        Operator::check_same_dim(l_, h_);
        if (std::abs(std::abs(s_) - 1.0) > kTolUnitModulus) {
            throw InvalidArgument("scattering coefficient must have unit modulus, |s| = " +
                                  std::to_string(std::abs(s_)));
        }
        if (!h_.is_hermitian()) {
            throw NotHermitian("SLH Hamiltonian is not Hermitian (max|H - H^dagger| = " +
                               std::to_string(h_.hermiticity_error()) + ")");
        }
    }

    /// (1, L, H)
    SLHTriple(Operator l, Operator h) : SLHTriple(Complex(1.0, 0.0), std::move(l), std::move(h)) {}

    Complex s() const noexcept { return s_; }
    const Operator& l() const noexcept { return l_; }
    const Operator& h() const noexcept { return h_; }
    Eigen::Index dim() const noexcept { return l_.dim(); }

private:
    Complex s_;
    Operator l_;
    Operator h_;
};

/// Cascade g1 -> g2 through one field:
///   (s2 s1, L2 + s2 L1, H1 + H2 + (L2^dag s2 L1 - L1^dag s2^* L2)/(2i)).
inline SLHTriple series_product(const SLHTriple& g1, const SLHTriple& g2) {
    if (g1.dim() != g2.dim()) {
        throw DimensionMismatch("series_product: operators must share a Hilbert space (" +
                                std::to_string(g1.dim()) + " vs " + std::to_string(g2.dim()) + ")");
    }
    const Complex s2 = g2.s();
    const CMatrix& l1 = g1.l().matrix();
    const CMatrix& l2 = g2.l().matrix();
    CMatrix cross = s2 * (l2.adjoint() * l1);
    // cross - cross^dagger is anti-Hermitian by construction, so dividing by 2i
    // is Hermitian; symmetrize to drop rounding asymmetry.
    CMatrix h = g1.h().matrix() + g2.h().matrix() + (cross - cross.adjoint()) / (2.0 * kI);
    h = 0.5 * (h + h.adjoint()).eval();
    return SLHTriple(s2 * g1.s(), Operator(l2 + s2 * l1), Operator(std::move(h)));
}

/// Static phase shifter (e^{i phi}, 0, 0) acting on a dim-dimensional system.
inline SLHTriple phase_shifter(double phi, Eigen::Index dim) {
    return SLHTriple(std::polar(1.0, phi), Operator::zero(dim), Operator::zero(dim));
}

/// Coherent-feedback loop: dispersive coupling l1 (Hermitian), phase shifter,
/// then dissipative coupling l2 on the same system:
///   (1, l1, h_sys) |> (e^{i phi}, 0, 0) |> (1, l2, 0)
/// giving L = l2 + e^{i phi} l1 and
///       H = h_sys + (e^{i phi} l2^dag l1 - e^{-i phi} l1 l2)/(2i).
inline SLHTriple coherent_feedback(const Operator& l1, const Operator& l2, const Operator& h_sys,
                                   double phi) {
    Operator::check_same_dim(l1, l2);
    Operator::check_same_dim(l1, h_sys);
    if (!l1.is_hermitian()) {
        throw NotHermitian(
            "coherent_feedback: dispersive coupling l1 must be Hermitian (max|l1 - l1^dagger| = " +
            std::to_string(l1.hermiticity_error()) +
            "); a dissipative first coupling needs series_product directly");
    }
    const auto d = l1.dim();
    return series_product(series_product(SLHTriple(l1, h_sys), phase_shifter(phi, d)),
                          SLHTriple(l2, Operator::zero(d)));
}

}  // namespace cfq
