#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace cfq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Liouvillian kernel has more than one direction, so no unique steady state exists.
class DegenerateKernel : public Error {
public:
    DegenerateKernel(std::size_t kernel_dim, const std::string& what)
        : Error(what), kernel_dim_(kernel_dim) {}
    std::size_t kernel_dim() const noexcept { return kernel_dim_; }

private:
    std::size_t kernel_dim_;
};

class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(double t, const std::string& what) : Error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class NotHurwitz : public Error {
public:
    using Error::Error;
};

class TruncationUnsafe : public Error {
public:
    using Error::Error;
};

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace cfq
