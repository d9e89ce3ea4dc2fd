#pragma once

// Adaptive Dormand–Prince 5(4) integration of the master equation.

#include "cfq/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cfq {

struct IntegrationOptions {
    double t_end = 1.0;
    double dt_max = 0.1;
    double atol = 1e-9;
    double rtol = 1e-9;
    /// Number of uniformly spaced stored states, t = 0 and t_end included.
    /// Used when `times` is empty.
    std::size_t samples = 101;
    /// Explicit output times (strictly increasing, within (0, t_end]).
    std::vector<double> times;
};

/// Sampled evolution; `times[0]` is 0 and holds the initial state.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<std::pair<std::string, std::vector<double>>> observables;

    std::size_t size() const noexcept { return times.size(); }

    const std::vector<double>& add_observable(std::string name,
                                              const std::function<double(const DensityMatrix&)>& f) {
        std::vector<double> values;
        values.reserve(states.size());
        for (const auto& s : states) values.push_back(f(s));
        observables.emplace_back(std::move(name), std::move(values));
        return observables.back().second;
    }

    const std::vector<double>& observable(const std::string& name) const {
        for (const auto& [n, v] : observables)
            if (n == name) return v;
        throw InvalidArgument("trajectory has no observable '" + name + "'");
    }
};

namespace detail {

// Dormand–Prince tableau.
struct DoPri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b*, the embedded fourth-order difference.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline std::vector<double> output_times(const IntegrationOptions& opt) {
    std::vector<double> out;
    if (!opt.times.empty()) {
        out = opt.times;
    } else {
        if (opt.samples < 2) throw InvalidArgument("integrate: samples must be at least 2");
        const std::size_t n = opt.samples - 1;
        out.reserve(n);
        for (std::size_t i = 1; i <= n; ++i)
            out.push_back(opt.t_end * static_cast<double>(i) / static_cast<double>(n));
    }
    double prev = 0.0;
    for (double t : out) {
        if (!(t > prev) || t > opt.t_end * (1.0 + 1e-12)) {
            throw InvalidArgument("integrate: output times must be strictly increasing within (0, t_end]");
        }
        prev = t;
    }
    return out;
}

}  // namespace detail

/// Integrates dρ/dt from rho0 up to opt.t_end. The step never exceeds dt_max
/// and lands exactly on every output time. Trace is not renormalized.
inline Trajectory integrate(const LindbladSystem& sys, const DensityMatrix& rho0,
                            const IntegrationOptions& opt) {
    check_dims(sys, rho0.dim(), "integrate");
    if (!(opt.t_end > 0.0)) throw InvalidArgument("integrate: t_end must be positive");
    if (!(opt.dt_max > 0.0)) throw InvalidArgument("integrate: dt_max must be positive");

    using T = detail::DoPri;
    const std::vector<double> outputs = detail::output_times(opt);
    auto f = [&sys](const CMatrix& r) { return liouvillian_apply(sys, r); };

    Trajectory traj;
    traj.times.reserve(outputs.size() + 1);
    traj.states.reserve(outputs.size() + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    CMatrix y = rho0.matrix();
    CMatrix k1 = f(y);
    double t = 0.0;
    double cap = opt.dt_max;
    const double scale = std::max(max_abs(sys.effective_generator()) * static_cast<double>(sys.dim()), 1e-12);
    double h = std::min(cap, 0.01 / scale);
    int consecutive_rejects = 0;

    for (double target : outputs) {
        while (t < target) {
            bool clipped = false;
            double step = std::min(h, cap);
            // Stretch onto the output time rather than leave a sliver behind.
            if (t + step >= target - 1e-10 * step) {
                step = target - t;
                clipped = true;
            }
            if (!clipped && step < 1e-13 * std::max(1.0, t)) {
                throw StepSizeUnderflow(t, "integrate: step size underflow at t = " + std::to_string(t));
            }
            const CMatrix k2 = f(y + step * (T::a21 * k1));
            const CMatrix k3 = f(y + step * (T::a31 * k1 + T::a32 * k2));
            const CMatrix k4 = f(y + step * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
            const CMatrix k5 = f(y + step * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
            const CMatrix k6 =
                f(y + step * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
            CMatrix y_new = y + step * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            const CMatrix k7 = f(y_new);
            const CMatrix err = step * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 +
                                        T::e6 * k6 + T::e7 * k7);

            const double ymag = std::max(max_abs(y), max_abs(y_new));
            const double err_norm = max_abs(err) / (opt.atol + opt.rtol * ymag);
            const double factor =
                err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);

            if (err_norm <= 1.0) {
                t = clipped ? target : t + step;
                y = std::move(y_new);
                k1 = k7;  // FSAL
                consecutive_rejects = 0;
                // A clipped step says nothing about the natural step size.
                if (!clipped || factor < 1.0) h = step * factor;
                if (clipped) h = std::max(h, step);
            } else {
                h = step * factor;
                // Stiffness fallback: persistent rejection lowers the step cap.
                if (++consecutive_rejects >= 8) {
                    cap *= 0.5;
                    consecutive_rejects = 0;
                }
            }
        }
        traj.times.push_back(target);
        traj.states.push_back(DensityMatrix::trusted(y));
    }
    return traj;
}

}  // namespace cfq
