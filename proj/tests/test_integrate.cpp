#include "catch_amalgamated.hpp"

#include "support.hpp"

#include <cmath>

using namespace cfq;
using namespace testing_support;

namespace {

void check_physical(const Trajectory& tr) {
    for (const auto& s : tr.states) {
        REQUIRE(s.trace_error() <= 1e-6);
        REQUIRE(s.hermiticity_error() <= 1e-8);
        REQUIRE(s.min_eigenvalue() >= -1e-6);
    }
}

}  // namespace

TEST_CASE("closed system without Hamiltonian stays put", "[integrate]") {
    std::mt19937_64 rng(1);
    const auto rho0 = random_state(3, rng);
    IntegrationOptions opt;
    opt.t_end = 5.0;
    opt.samples = 11;
    const auto tr = integrate(LindbladSystem(Operator::zero(3), {}), rho0, opt);
    REQUIRE(tr.size() == 11);
    for (const auto& s : tr.states) CHECK(max_abs(s.matrix() - rho0.matrix()) == 0.0);
}

TEST_CASE("spontaneous decay follows the exponential", "[integrate]") {
    const double gamma = 1.7;
    const LindbladSystem sys(Operator::zero(2), {std::sqrt(gamma) * basis::qubit::sigma_minus()});
    CVector plus(2);
    plus << 1.0, 1.0;
    plus /= std::sqrt(2.0);
    IntegrationOptions opt;
    opt.t_end = 4.0;
    opt.samples = 41;
    const auto tr = integrate(sys, DensityMatrix::pure(plus), opt);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times[i];
        CHECK(std::abs(tr.states[i](0, 0).real() - 0.5 * std::exp(-gamma * t)) <= 1e-8);
        CHECK(std::abs(tr.states[i](0, 1).real() - 0.5 * std::exp(-0.5 * gamma * t)) <= 1e-8);
    }
}

TEST_CASE("Rabi oscillation matches cos^2", "[integrate]") {
    const double omega = 2.3;
    const LindbladSystem sys(Operator(0.5 * omega * (basis::qubit::sigma_minus() + basis::qubit::sigma_plus()).matrix()), {});
    IntegrationOptions opt;
    opt.t_end = 10.0;
    opt.samples = 101;
    opt.dt_max = 0.05;
    const auto tr = integrate(sys, DensityMatrix::pure(basis::qubit::excited()), opt);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(std::abs(tr.states[i](0, 0).real() - std::pow(std::cos(0.5 * omega * tr.times[i]), 2)) <= 1e-8);
    }
}

TEST_CASE("output grid lands exactly on requested times", "[integrate]") {
    const auto sys = models::qubit_cf(1.0, 1.0, 0.0);
    IntegrationOptions opt;
    opt.t_end = 3.0;
    opt.times = {0.1, 0.7, 1.0 / 3.0 + 1.0, 3.0};
    const auto tr = integrate(sys, DensityMatrix::maximally_mixed(2), opt);
    REQUIRE(tr.size() == 5);
    CHECK(tr.times[0] == 0.0);
    for (std::size_t i = 0; i < opt.times.size(); ++i) CHECK(tr.times[i + 1] == opt.times[i]);

    IntegrationOptions uniform;
    uniform.t_end = 2.0;
    uniform.samples = 7;
    const auto tu = integrate(sys, DensityMatrix::maximally_mixed(2), uniform);
    REQUIRE(tu.size() == 7);
    CHECK(tu.times.back() == 2.0);
}

TEST_CASE("integration option errors", "[integrate][errors]") {
    const auto sys = models::qubit_cf(1.0, 1.0, 0.0);
    const auto rho = DensityMatrix::maximally_mixed(2);
    IntegrationOptions opt;
    opt.t_end = 0.0;
    CHECK_THROWS_AS(integrate(sys, rho, opt), InvalidArgument);
    opt.t_end = 1.0;
    opt.times = {0.5, 0.4};
    CHECK_THROWS_AS(integrate(sys, rho, opt), InvalidArgument);
    opt.times = {0.5, 1.5};
    CHECK_THROWS_AS(integrate(sys, rho, opt), InvalidArgument);
    opt.times.clear();
    opt.samples = 1;
    CHECK_THROWS_AS(integrate(sys, rho, opt), InvalidArgument);
    CHECK_THROWS_AS(integrate(sys, DensityMatrix::maximally_mixed(3), IntegrationOptions{}), DimensionMismatch);
}

TEST_CASE("unreachable tolerance reports step underflow with a time stamp", "[integrate][errors]") {
    const auto sys = models::qubit_cf(1.0, 1.0, 0.0);
    IntegrationOptions opt;
    opt.atol = 0.0;
    opt.rtol = 1e-30;
    try {
        integrate(sys, DensityMatrix::pure(basis::qubit::excited()), opt);
        FAIL("expected StepSizeUnderflow");
    } catch (const StepSizeUnderflow& e) {
        CHECK(e.time() >= 0.0);
        CHECK(e.time() < opt.t_end);
    }
}

TEST_CASE("ideal qubit loop converges from random initial states", "[integrate]") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 6; ++i) {
        const double kappa = uniform(rng, 0.2, 3.0), gamma = uniform(rng, 0.2, 3.0), phi = uniform(rng, -M_PI, M_PI);
        IntegrationOptions opt;
        opt.t_end = 20.0 / std::min(kappa, gamma);
        opt.samples = 51;
        const auto tr = integrate(models::qubit_cf(kappa, gamma, phi), random_state(2, rng), opt);
        check_physical(tr);
        CHECK(fidelity(models::qubit_target(kappa, gamma, phi), tr.states.back()) >= 0.999);
    }
}

TEST_CASE("unique steady state attracts every initial state", "[integrate][property]") {
    struct Case {
        const char* name;
        LindbladSystem sys;
        double t_end;
    };
    const double k = 100.0, g = 1.0;
    std::vector<Case> cases{
        {"qubit ideal", models::qubit_cf(0.5, 1.0, 0.3), 40.0},
        {"qubit imperfect", [] {
             models::ImperfectionSpec imp;
             imp.detunings["delta"] = 0.3;
             imp.extra_channels = {{"eps1", 0.01}, {"eps2", 0.005}};
             return models::qubit_cf(0.5, 1.0, 0.0, imp);
         }(), 60.0},
        {"qutrit Phi1", models::qutrit_cf(k, g, -std::sqrt(k * g) / 2.0, 0.0), 50.0},
        {"qutrit Phi2", models::qutrit_cf(k, g, 0.0, std::sqrt(k * g) / 2.0), 50.0},
        {"qutrit Phi3", models::qutrit_cf(k, g, 0.0, std::sqrt(k * g)), 50.0},
        {"qutrit H_sys=0", models::qutrit_cf(1.0, 3.0, 0.0, 0.0), 50.0},
        {"Fock", models::fock_cf(1.0, 0.25, 0.5, 20), 160.0},
    };
    std::mt19937_64 rng(33);
    for (const auto& c : cases) {
        REQUIRE(kernel_dimension(c.sys) == 1);
        const auto inf = steady_state(c.sys);
        IntegrationOptions opt;
        opt.t_end = c.t_end;
        opt.samples = 21;
        for (int i = 0; i < 10; ++i) {
            const auto tr = integrate(c.sys, random_state(c.sys.dim(), rng), opt);
            check_physical(tr);
            INFO(c.name << " initial state " << i);
            CHECK(trace_distance(tr.states.back(), inf) <= 1e-4);
        }
    }
}
