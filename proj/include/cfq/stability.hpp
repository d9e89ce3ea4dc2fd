#pragma once

// Pure steady states (common eigenvectors of L and iH + L†L/2), dark-state
// uniqueness, and the qutrit gain design.

#include "cfq/lindblad.hpp"
#include "cfq/models.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace cfq {

/// ‖A ψ - (ψ†Aψ) ψ‖ for unit ψ: distance of ψ from being an eigenvector of A.
inline double eigen_residual(const CMatrix& a, const CVector& psi) {
    const CVector a_psi = a * psi;
    return (a_psi - psi.dot(a_psi) * psi).norm();
}

struct PureSteadyCheck {
    bool steady = false;
    double l_residual = 0.0;  // ‖Lψ - (ψ†Lψ)ψ‖
    double k_residual = 0.0;  // same for K = iH + L†L/2
};

/// Pure state ψ is steady iff it is a common eigenvector of L and iH + L†L/2.
inline PureSteadyCheck check_pure_steady(const Operator& l, const Operator& h, const CVector& psi,
                                         double tol = 1e-8) {
    Operator::check_same_dim(l, h);
    if (psi.size() != l.dim()) throw DimensionMismatch("check_pure_steady: vector dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidArgument("check_pure_steady: psi must be normalized");
    const CMatrix k = kI * h.matrix() + 0.5 * l.matrix().adjoint() * l.matrix();
    PureSteadyCheck out;
    out.l_residual = eigen_residual(l.matrix(), psi);
    out.k_residual = eigen_residual(k, psi);
    out.steady = out.l_residual <= tol && out.k_residual <= tol;
    return out;
}

/// Orthonormal basis of the column span.
inline CMatrix orthonormal_basis(const CMatrix& m) {
    Eigen::ColPivHouseholderQR<CMatrix> qr(m);
    qr.setThreshold(1e-10);
    const CMatrix q = qr.householderQ();
    return q.leftCols(qr.rank());
}

enum class Uniqueness { unique, not_unique, inconclusive };

struct DarkStateUniqueness {
    Uniqueness verdict = Uniqueness::inconclusive;
    double eigenvector_condition = 0.0;
    /// Smallest overlap between an L-eigenspace and span(dark); zero means an
    /// eigenvector of L lies in the orthogonal complement.
    double min_overlap = 0.0;

    bool unique() const noexcept { return verdict == Uniqueness::unique; }
};

/// Single-channel dark-state uniqueness test.
///
/// Any L-invariant subspace S ⊥ span(dark) contains an eigenvector of L, so
/// the dark set is the unique set of steady states when no eigenvector of L
/// is orthogonal to it. Eigenvalues closer than `cluster_tol` are grouped and
/// each eigenspace is checked as a whole. An ill-conditioned eigenvector basis
/// (defective L) makes the result inconclusive.
inline DarkStateUniqueness unique_dark_state_test(const Operator& l, const std::vector<CVector>& dark,
                                                  double orth_tol = 1e-8, double cluster_tol = 1e-8,
                                                  double max_condition = 1e8) {
    if (dark.empty()) throw InvalidArgument("unique_dark_state_test: dark set is empty");
    const Eigen::Index d = l.dim();
    CMatrix dmat(d, static_cast<Eigen::Index>(dark.size()));
    for (std::size_t i = 0; i < dark.size(); ++i) {
        if (dark[i].size() != d) throw DimensionMismatch("unique_dark_state_test: dark vector dim mismatch");
        dmat.col(static_cast<Eigen::Index>(i)) = dark[i];
    }
    const CMatrix dark_basis = orthonormal_basis(dmat);

    Eigen::ComplexEigenSolver<CMatrix> es(l.matrix());
    const CMatrix& vecs = es.eigenvectors();
    const CVector& vals = es.eigenvalues();

    DarkStateUniqueness out;
    Eigen::JacobiSVD<CMatrix> cond_svd(vecs);
    const RVector sv = cond_svd.singularValues();
    out.eigenvector_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                        : std::numeric_limits<double>::infinity();

    const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1.0);
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    out.min_overlap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        std::vector<Eigen::Index> members;
        for (Eigen::Index j = i; j < d; ++j) {
            if (!used[static_cast<std::size_t>(j)] && std::abs(vals(j) - vals(i)) <= cluster_tol * scale) {
                used[static_cast<std::size_t>(j)] = true;
                members.push_back(j);
            }
        }
        CMatrix block(d, static_cast<Eigen::Index>(members.size()));
        for (std::size_t m = 0; m < members.size(); ++m) block.col(static_cast<Eigen::Index>(m)) = vecs.col(members[m]);
        const CMatrix e_basis = orthonormal_basis(block);
        // Some unit vector of the eigenspace is orthogonal to the dark span iff
        // dark_basis† e_basis has a (near) null direction.
        const CMatrix overlap = dark_basis.adjoint() * e_basis;
        double smallest = 0.0;
        if (overlap.rows() >= overlap.cols()) {
            Eigen::JacobiSVD<CMatrix> os(overlap);
            smallest = os.singularValues()(os.singularValues().size() - 1);
        }
        out.min_overlap = std::min(out.min_overlap, smallest);
    }

    if (out.eigenvector_condition > max_condition) {
        out.verdict = Uniqueness::inconclusive;
    } else {
        out.verdict = out.min_overlap > orth_tol ? Uniqueness::unique : Uniqueness::not_unique;
    }
    return out;
}

// ---------------------------------------------------------------- qutrit design

enum class QutritTarget { phi1 = 1, phi2 = 2, phi3 = 3 };

struct QutritDarkBasis {
    CVector phi1, phi2, phi3;

    const CVector& operator[](QutritTarget t) const {
        switch (t) {
            case QutritTarget::phi1: return phi1;
            case QutritTarget::phi2: return phi2;
            default: return phi3;
        }
    }
};

/// Eigenvectors of the qutrit loop coupling L:
///   Φ1 ∝ [2κ, 2sqrt(κγ), γ]ᵀ,  Φ2 ∝ [0, sqrt(κ), sqrt(γ)]ᵀ,  Φ3 = |3>.
inline QutritDarkBasis qutrit_dark_basis(double kappa, double gamma) {
    if (!(kappa > 0.0 && gamma > 0.0)) throw InvalidArgument("qutrit_dark_basis: rates must be positive");
    QutritDarkBasis b{CVector(3), CVector(3), basis::ket(3, 2)};
    b.phi1 << 2.0 * kappa, 2.0 * std::sqrt(kappa * gamma), gamma;
    b.phi2 << 0.0, std::sqrt(kappa), std::sqrt(gamma);
    b.phi1.normalize();
    b.phi2.normalize();
    const CMatrix l = models::qutrit_cf_triple(kappa, gamma, 0.0, 0.0).l().matrix();
    for (const CVector* v : {&b.phi1, &b.phi2, &b.phi3}) {
        if (eigen_residual(l, *v) > 1e-10 * std::max(1.0, std::sqrt(kappa + gamma))) {
            throw Error("qutrit_dark_basis: vector is not an eigenvector of L");
        }
    }
    return b;
}

struct QutritGains {
    double u1 = 0.0;
    double u2 = 0.0;
};

/// Solves (iH(u) + L†L/2)Φ = λΦ for real (u1, u2) and complex λ by linear
/// least squares. iH is affine in u, so the basis matrices are read off the
/// model constructor at u = 0 and unit gains. The minimum-norm solution is
/// returned when a gain is unconstrained (u1 for Φ3).
inline QutritGains solve_qutrit_gains(QutritTarget target, double kappa, double gamma) {
    const CVector phi = qutrit_dark_basis(kappa, gamma)[target];
    auto generator = [&](double u1, double u2) {
        const SLHTriple g = models::qutrit_cf_triple(kappa, gamma, u1, u2);
        return CMatrix(kI * g.h().matrix() + 0.5 * g.l().matrix().adjoint() * g.l().matrix());
    };
    const CMatrix k0 = generator(0.0, 0.0);
    const CVector base = k0 * phi;
    const CVector d1 = (generator(1.0, 0.0) - k0) * phi;
    const CVector d2 = (generator(0.0, 1.0) - k0) * phi;

    // Unknowns (u1, u2, Re λ, Im λ):  u1 d1 + u2 d2 - λ φ = -K0 φ.
    Eigen::Matrix<double, 6, 4> a;
    Eigen::Matrix<double, 6, 1> b;
    for (int r = 0; r < 3; ++r) {
        const Complex cols[4] = {d1(r), d2(r), -phi(r), -kI * phi(r)};
        for (int c = 0; c < 4; ++c) {
            a(r, c) = cols[c].real();
            a(r + 3, c) = cols[c].imag();
        }
        b(r) = -base(r).real();
        b(r + 3) = -base(r).imag();
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 6, 4>> cod(a);
    cod.setThreshold(1e-12);
    const Eigen::Vector4d x = cod.solve(b);
    QutritGains gains{x(0), x(1)};

    const CMatrix k = generator(gains.u1, gains.u2);
    const double resid = eigen_residual(k, phi);
    if (resid > 1e-10 * std::max(1.0, kappa + gamma)) {
        throw Error("solve_qutrit_gains: no gains make the target an eigenvector (residual " +
                    std::to_string(resid) + ")");
    }
    // Clean roundoff on exact zeros so downstream printing is stable.
    const double s = std::sqrt(kappa * gamma);
    if (std::abs(gains.u1) < 1e-14 * s) gains.u1 = 0.0;
    if (std::abs(gains.u2) < 1e-14 * s) gains.u2 = 0.0;
    return gains;
}

/// min_λ ‖(i(H + H_δ) + L†L/2)Φ - λΦ‖ for the ideal-loss qutrit with detunings.
inline double detuning_robustness_residual(double kappa, double gamma, double delta1, double delta2,
                                           QutritGains gains, QutritTarget target) {
    models::ImperfectionSpec imp;
    imp.detunings = {{"delta1", delta1}, {"delta2", delta2}};
    const LindbladSystem sys = models::qutrit_cf(kappa, gamma, gains.u1, gains.u2, imp);
    return eigen_residual(sys.effective_generator(), qutrit_dark_basis(kappa, gamma)[target]);
}

}  // namespace cfq
