#pragma once

#include "cfq/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace cfq {

/// Relative Hermiticity tolerance used throughout the library.
inline constexpr double kTolHerm = 1e-10;

/// Dense square operator on a finite (possibly truncated) Hilbert space.
///
/// Rates are stored pre-multiplied, e.g. sqrt(kappa) sits inside a coupling
/// operator. The wrapped matrix is always square with dim >= 1.
class Operator {
public:
    Operator() : m_(CMatrix::Zero(1, 1)) {}

    explicit Operator(CMatrix m) : m_(std::move(m)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols()) {
            throw DimensionMismatch("Operator must be square with dim >= 1, got " +
                                    std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
        }
    }

    static Operator zero(Eigen::Index dim) { return Operator(CMatrix::Zero(dim, dim)); }
    static Operator identity(Eigen::Index dim) { return Operator(CMatrix::Identity(dim, dim)); }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    Operator adjoint() const { return Operator(m_.adjoint()); }

    /// max|M - M^dagger|.
    double hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }

    bool is_hermitian(double rel_tol = kTolHerm) const {
        return hermiticity_error() <= rel_tol * std::max(max_abs(m_), 1.0);
    }

    friend Operator operator+(const Operator& a, const Operator& b) {
        check_same_dim(a, b);
        return Operator(a.m_ + b.m_);
    }
    friend Operator operator-(const Operator& a, const Operator& b) {
        check_same_dim(a, b);
        return Operator(a.m_ - b.m_);
    }
    friend Operator operator*(const Operator& a, const Operator& b) {
        check_same_dim(a, b);
        return Operator(a.m_ * b.m_);
    }
    friend Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }
    friend Operator operator*(const Operator& a, Complex s) { return Operator(s * a.m_); }
    friend Operator operator*(double s, const Operator& a) { return Operator(s * a.m_); }
    friend Operator operator-(const Operator& a) { return Operator(-a.m_); }

    Operator& operator+=(const Operator& b) {
        check_same_dim(*this, b);
        m_ += b.m_;
        return *this;
    }

    static void check_same_dim(const Operator& a, const Operator& b) {
        if (a.dim() != b.dim()) {
            throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
        }
    }

private:
    CMatrix m_;
};

/// Entrywise max distance between two operators of equal dimension.
inline double max_distance(const Operator& a, const Operator& b) {
    Operator::check_same_dim(a, b);
    return max_abs(a.matrix() - b.matrix());
}

}  // namespace cfq
