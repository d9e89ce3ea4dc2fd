#pragma once

// Master-equation generator, density matrices and the vectorized Liouvillian.

#include "cfq/operator.hpp"
#include "cfq/slh.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace cfq {

/// dρ/dt = -i[H, ρ] + Σ_k D[L_k]ρ with D[L]ρ = LρL† - ½L†Lρ - ½ρL†L.
class LindbladSystem {
public:
    LindbladSystem(Operator h, std::vector<Operator> channels)
        : h_(std::move(h)), channels_(std::move(channels)) {
        if (!h_.is_hermitian()) {
            throw NotHermitian("LindbladSystem: Hamiltonian is not Hermitian (max|H - H^dagger| = " +
                               std::to_string(h_.hermiticity_error()) + ")");
        }
        for (const auto& l : channels_) Operator::check_same_dim(h_, l);
        CMatrix k = kI * h_.matrix();
        for (const auto& l : channels_) k += 0.5 * l.matrix().adjoint() * l.matrix();
        effective_ = std::move(k);
    }

    /// Single-channel system from an SLH triple, plus optional detuning
    /// Hamiltonian and uncontrolled extra channels.
    static LindbladSystem from_slh(const SLHTriple& g, const Operator& extra_h,
                                   std::vector<Operator> extra_channels = {}) {
        std::vector<Operator> channels;
        channels.reserve(extra_channels.size() + 1);
        channels.push_back(g.l());
        for (auto& c : extra_channels) channels.push_back(std::move(c));
        return LindbladSystem(g.h() + extra_h, std::move(channels));
    }

    static LindbladSystem from_slh(const SLHTriple& g) {
        return LindbladSystem(g.h(), {g.l()});
    }

    const Operator& hamiltonian() const noexcept { return h_; }
    const std::vector<Operator>& channels() const noexcept { return channels_; }
    Eigen::Index dim() const noexcept { return h_.dim(); }

    /// K = iH + ½ Σ L†L, so that dρ/dt = -Kρ - ρK† + Σ LρL†.
    const CMatrix& effective_generator() const noexcept { return effective_; }

private:
    Operator h_;
    std::vector<Operator> channels_;
    CMatrix effective_;
};

/// Tolerances of a valid density matrix.
struct DensityTolerance {
    double hermiticity = 1e-8;
    double trace = 1e-8;
    double min_eigenvalue = -1e-8;
};

/// Hermitian, unit-trace, positive-semidefinite state.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix m, DensityTolerance tol = {}) : m_(std::move(m)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols()) {
            throw DimensionMismatch("density matrix must be square");
        }
        const double herm = max_abs(m_ - m_.adjoint());
        if (herm > tol.hermiticity) {
            throw InvalidArgument("density matrix not Hermitian: max|rho - rho^dagger| = " +
                                  std::to_string(herm));
        }
        const double tr_err = std::abs(m_.trace() - Complex(1.0, 0.0));
        if (tr_err > tol.trace) {
            throw InvalidArgument("density matrix trace differs from 1 by " + std::to_string(tr_err));
        }
        const double min_eig = min_eigenvalue();
        if (min_eig < tol.min_eigenvalue) {
            throw InvalidArgument("density matrix has negative eigenvalue " + std::to_string(min_eig));
        }
    }

    /// Wraps a matrix produced by the library's own evolution without validation.
    static DensityMatrix trusted(CMatrix m) { return DensityMatrix(std::move(m), Trusted{}); }

    static DensityMatrix pure(const CVector& psi) {
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-10) {
            throw InvalidArgument("pure state vector must be normalized, |psi| = " + std::to_string(norm));
        }
        return DensityMatrix(psi * psi.adjoint());
    }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    double hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }
    double trace_error() const { return std::abs(m_.trace() - Complex(1.0, 0.0)); }

    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const {
        const CMatrix herm = 0.5 * (m_ + m_.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

private:
    struct Trusted {};
    DensityMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

    CMatrix m_;
};

inline void check_dims(const LindbladSystem& sys, Eigen::Index dim, const char* where) {
    if (sys.dim() != dim) {
        throw DimensionMismatch(std::string(where) + ": system dim " + std::to_string(sys.dim()) +
                                " vs state dim " + std::to_string(dim));
    }
}

/// Right-hand side of the master equation applied to an arbitrary matrix.
inline CMatrix liouvillian_apply(const LindbladSystem& sys, const CMatrix& rho) {
    check_dims(sys, rho.rows(), "liouvillian_apply");
    const CMatrix& k = sys.effective_generator();
    CMatrix out = -k * rho - rho * k.adjoint();
    for (const auto& l : sys.channels()) {
        out.noalias() += l.matrix() * rho * l.matrix().adjoint();
    }
    return out;
}

inline Operator liouvillian_apply(const LindbladSystem& sys, const DensityMatrix& rho) {
    return Operator(liouvillian_apply(sys, rho.matrix()));
}

/// Largest Hilbert dimension squared accepted by liouvillian_matrix.
inline constexpr Eigen::Index kDefaultSuperoperatorCap = 4096;

/// Column-stacked superoperator M with vec(dρ/dt) = M vec(ρ).
inline CMatrix liouvillian_matrix(const LindbladSystem& sys,
                                  Eigen::Index cap = kDefaultSuperoperatorCap) {
    const Eigen::Index d = sys.dim();
    if (d * d > cap) {
        throw InvalidArgument("liouvillian_matrix: dim^2 = " + std::to_string(d * d) +
                              " exceeds cap " + std::to_string(cap));
    }
    const CMatrix id = CMatrix::Identity(d, d);
    auto kron = [](const CMatrix& a, const CMatrix& b) {
        CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    // vec(AXB) = (B^T ⊗ A) vec(X); with K = iH + ½ΣL†L:
    //   -Kρ  -> -(I ⊗ K),  -ρK† -> -(K̄ ⊗ I),  LρL† -> (L̄ ⊗ L)
    const CMatrix& k = sys.effective_generator();
    CMatrix m = -kron(id, k) - kron(k.conjugate(), id);
    for (const auto& l : sys.channels()) m += kron(l.matrix().conjugate(), l.matrix());
    return m;
}

inline CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

inline CMatrix unvec(const CVector& v, Eigen::Index dim) {
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

/// Singular-value picture of the Liouvillian kernel.
struct KernelAnalysis {
    RVector singular_values;  // descending
    Eigen::Index kernel_dim = 0;
    CMatrix null_vectors;     // columns spanning the numerical kernel (vectorized ρ)
};

/// Singular values below rel_threshold * sigma_max count as zero.
inline constexpr double kKernelThreshold = 1e-10;

inline KernelAnalysis analyze_kernel(const LindbladSystem& sys,
                                     double rel_threshold = kKernelThreshold,
                                     Eigen::Index cap = kDefaultSuperoperatorCap) {
    const CMatrix m = liouvillian_matrix(sys, cap);
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    KernelAnalysis out;
    out.singular_values = svd.singularValues();
    const double cut = rel_threshold * std::max(out.singular_values(0), 1e-300);
    const Eigen::Index n = out.singular_values.size();
    Eigen::Index zeros = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.singular_values(i) < cut) ++zeros;
    // A trace-preserving generator always has a kernel; keep at least one direction.
    out.kernel_dim = zeros;
    const Eigen::Index keep = std::max<Eigen::Index>(zeros, 1);
    out.null_vectors = svd.matrixV().rightCols(keep);
    return out;
}

inline Eigen::Index kernel_dimension(const LindbladSystem& sys) {
    return std::max<Eigen::Index>(analyze_kernel(sys).kernel_dim, 1);
}

/// Hermitize, clip negative eigenvalues and renormalize to unit trace.
inline CMatrix project_to_state(const CMatrix& m) {
    CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    RVector w = es.eigenvalues().cwiseMax(0.0);
    const double total = w.sum();
    if (!(total > 0.0)) throw Error("project_to_state: matrix has no positive part");
    w /= total;
    CMatrix out = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (out + out.adjoint());
}

/// Unique steady state from the smallest right-singular vector of the Liouvillian.
inline DensityMatrix steady_state(const LindbladSystem& sys,
                                  Eigen::Index cap = kDefaultSuperoperatorCap) {
    const KernelAnalysis ka = analyze_kernel(sys, kKernelThreshold, cap);
    if (ka.kernel_dim > 1) {
        throw DegenerateKernel(static_cast<std::size_t>(ka.kernel_dim),
                               "steady_state: Liouvillian kernel has dimension " +
                                   std::to_string(ka.kernel_dim) + "; steady state is not unique");
    }
    CMatrix rho = unvec(ka.null_vectors.col(0), sys.dim());
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw Error("steady_state: kernel vector is traceless");
    rho /= tr;
    return DensityMatrix::trusted(project_to_state(rho));
}

}  // namespace cfq
