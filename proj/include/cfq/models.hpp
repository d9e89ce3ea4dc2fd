#pragma once

// Coherent-feedback models: qubit, qutrit, spin squeezing and Fock-state
// generation, in ideal and imperfect variants.

#include "cfq/basis.hpp"
#include "cfq/gaussian.hpp"
#include "cfq/lindblad.hpp"
#include "cfq/slh.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cfq::models {

struct ExtraChannel {
    std::string label;
    double rate = 0.0;
};

/// Detunings, uncontrolled decay channels and gain mismatch of a realistic setup.
struct ImperfectionSpec {
    std::map<std::string, double> detunings;
    std::vector<ExtraChannel> extra_channels;
    double gain_mismatch = 0.0;

    void validate(const std::set<std::string>& detuning_names,
                  const std::set<std::string>& channel_labels) const {
        for (const auto& [name, value] : detunings) {
            if (!detuning_names.count(name)) throw InvalidArgument("unknown detuning '" + name + "'");
            if (!std::isfinite(value)) throw InvalidArgument("detuning '" + name + "' is not finite");
        }
        for (const auto& ch : extra_channels) {
            if (!channel_labels.count(ch.label))
                throw InvalidArgument("unknown extra channel '" + ch.label + "'");
            if (!(ch.rate >= 0.0)) throw InvalidArgument("extra channel '" + ch.label + "' has negative rate");
        }
        if (!(std::abs(gain_mismatch) < 1.0)) throw InvalidArgument("gain mismatch must satisfy |Delta| < 1");
    }

    double detuning(const std::string& name) const {
        auto it = detunings.find(name);
        return it == detunings.end() ? 0.0 : it->second;
    }

    double channel_rate(const std::string& label) const {
        double total = 0.0;
        for (const auto& ch : extra_channels)
            if (ch.label == label) total += ch.rate;
        return total;
    }
};

namespace detail {
inline void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be positive");
}
}  // namespace detail

// ---------------------------------------------------------------- qubit

/// L = sqrt(γ)σ- + e^{iφ} sqrt(κ)σz with the matching feedback Hamiltonian.
inline SLHTriple qubit_cf_triple(double kappa, double gamma, double phi) {
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    using namespace basis::qubit;
    return coherent_feedback(std::sqrt(kappa) * sigma_z(), std::sqrt(gamma) * sigma_minus(),
                             Operator::zero(2), phi);
}

/// Recognized imperfections: detuning "delta" (H_δ = δσz), channels
/// "eps1" (sqrt(ε1)σ-) and "eps2" (sqrt(ε2)σz).
inline LindbladSystem qubit_cf(double kappa, double gamma, double phi, const ImperfectionSpec& imp = {}) {
    imp.validate({"delta"}, {"eps1", "eps2"});
    using namespace basis::qubit;
    const SLHTriple g = qubit_cf_triple(kappa, gamma, phi);
    std::vector<Operator> extra;
    for (const auto& ch : imp.extra_channels) {
        const Operator& op = ch.label == "eps1" ? sigma_minus() : sigma_z();
        extra.push_back(std::sqrt(ch.rate) * op);
    }
    return LindbladSystem::from_slh(g, imp.detuning("delta") * sigma_z(), std::move(extra));
}

/// Target of the ideal qubit loop: (2e^{iφ}sqrt(κ), sqrt(γ))ᵀ / sqrt(4κ + γ).
inline CVector qubit_target(double kappa, double gamma, double phi) {
    CVector v(2);
    v << 2.0 * std::polar(std::sqrt(kappa), phi), std::sqrt(gamma);
    return v / std::sqrt(4.0 * kappa + gamma);
}

/// κ/γ giving a target with Bloch z-component z in (-1, 1).
inline double qubit_kappa_ratio_for_z(double z) {
    if (!(z > -1.0 && z < 1.0)) throw InvalidArgument("Bloch z must lie in (-1, 1)");
    return (1.0 + z) / (4.0 * (1.0 - z));
}

/// Couplings in the wrong order: dissipative sqrt(γ)σ- first, then the
/// dispersive sqrt(κ)σz. The first coupling is not Hermitian, so the loop is
/// built from the series product directly. γ = 0 is allowed (pure dephasing).
inline LindbladSystem qubit_wrong_order(double kappa, double gamma, double phi) {
    detail::require_positive(kappa, "kappa");
    if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be non-negative");
    using namespace basis::qubit;
    const SLHTriple first(std::polar(std::sqrt(gamma), phi) * sigma_minus(), Operator::zero(2));
    const SLHTriple second(std::sqrt(kappa) * sigma_z(), Operator::zero(2));
    return LindbladSystem::from_slh(series_product(first, second));
}

// ---------------------------------------------------------------- qutrit

inline Operator qutrit_dispersive(double kappa) {
    return Operator(CMatrix(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal()) * std::sqrt(kappa));
}

/// Ladder decay |1> -> |2> -> |3>.
inline Operator qutrit_ladder(double gamma) {
    return std::sqrt(gamma) * (basis::transition(3, 1, 0) + basis::transition(3, 2, 1));
}

/// H_sys = i u1(|2><1| - |1><2|) + i u2(|3><2| - |2><3|).
inline Operator qutrit_drive(double u1, double u2) {
    using basis::transition;
    return Complex(0.0, u1) * (transition(3, 1, 0) - transition(3, 0, 1)) +
           Complex(0.0, u2) * (transition(3, 2, 1) - transition(3, 1, 2));
}

inline SLHTriple qutrit_cf_triple(double kappa, double gamma, double u1, double u2) {
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    return coherent_feedback(qutrit_dispersive(kappa), qutrit_ladder(gamma), qutrit_drive(u1, u2), 0.0);
}

/// Recognized imperfections: detunings "delta1", "delta2"
/// (H_δ = δ1|1><1| + δ2|2><2|), channels "eps1" (sqrt(ε1)|2><1|) and
/// "eps2" (sqrt(ε2)|3><2|), gain mismatch scaling (u1, u2) by (1 + Δ).
inline LindbladSystem qutrit_cf(double kappa, double gamma, double u1, double u2,
                                const ImperfectionSpec& imp = {}) {
    imp.validate({"delta1", "delta2"}, {"eps1", "eps2"});
    const double scale = 1.0 + imp.gain_mismatch;
    const SLHTriple g = qutrit_cf_triple(kappa, gamma, scale * u1, scale * u2);
    const Operator h_delta = Operator(CMatrix(
        Eigen::Vector3cd(imp.detuning("delta1"), imp.detuning("delta2"), 0.0).asDiagonal()));
    std::vector<Operator> extra;
    for (const auto& ch : imp.extra_channels) {
        extra.push_back(std::sqrt(ch.rate) *
                        (ch.label == "eps1" ? basis::transition(3, 1, 0) : basis::transition(3, 2, 1)));
    }
    return LindbladSystem::from_slh(g, h_delta, std::move(extra));
}

// ---------------------------------------------------------------- spin squeezing

enum class CouplingOrder { normal, wrong };

/// Bosonized ensemble: dispersive sqrt(κ) q and dissipative sqrt(γ)(q + i p),
/// cascaded in the given order. Returns (G, C) of the resulting linear system.
inline GaussianModel spin_squeezing_model(double kappa, double gamma, CouplingOrder order) {
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    const GaussianModel dispersive(Mat2::Zero(), CRow2(std::sqrt(kappa), 0.0));
    const GaussianModel dissipative(Mat2::Zero(), CRow2(std::sqrt(gamma), Complex(0.0, std::sqrt(gamma))));
    return order == CouplingOrder::normal ? linear_series_product(dispersive, dissipative)
                                          : linear_series_product(dissipative, dispersive);
}

/// The same cascade on a Fock space truncated at n_levels, built with
/// operator-level SLH composition (independent of the Gaussian formulas).
inline LindbladSystem spin_squeezing_fock(double kappa, double gamma, Eigen::Index n_levels,
                                          CouplingOrder order) {
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    const Operator q = basis::fock::position(n_levels);
    const Operator p = basis::fock::momentum(n_levels);
    const Operator zero = Operator::zero(n_levels);
    const Operator l_disp = std::sqrt(kappa) * q;
    const Operator l_diss = std::sqrt(gamma) * (q + kI * p);
    if (order == CouplingOrder::normal) {
        return LindbladSystem::from_slh(coherent_feedback(l_disp, l_diss, zero, 0.0));
    }
    return LindbladSystem::from_slh(series_product(SLHTriple(l_diss, zero), SLHTriple(l_disp, zero)));
}

// ---------------------------------------------------------------- Fock state

inline SLHTriple fock_cf_triple(double kappa, double gamma, double g, Eigen::Index n_levels) {
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    if (n_levels < 10) throw InvalidArgument("Fock truncation must be at least 10 levels");
    using namespace basis::fock;
    const Operator a = annihilation(n_levels);
    const Operator drive = Complex(0.0, g) * (a.adjoint() - a);
    return coherent_feedback(std::sqrt(kappa) * number(n_levels), std::sqrt(gamma) * a, drive, 0.0);
}

/// L = sqrt(κ)n + sqrt(γ)a, H = ig(a† - a) + (sqrt(κγ)/2i)(a†n - na), optional
/// photon leakage sqrt(ε)a.
inline LindbladSystem fock_cf(double kappa, double gamma, double g, Eigen::Index n_levels,
                              std::optional<double> epsilon = std::nullopt) {
    const SLHTriple t = fock_cf_triple(kappa, gamma, g, n_levels);
    std::vector<Operator> extra;
    if (epsilon) {
        if (!(*epsilon >= 0.0)) throw InvalidArgument("leakage rate must be non-negative");
        extra.push_back(std::sqrt(*epsilon) * basis::fock::annihilation(n_levels));
    }
    return LindbladSystem::from_slh(t, Operator::zero(n_levels), std::move(extra));
}

}  // namespace cfq::models
