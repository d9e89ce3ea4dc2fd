#include "catch_amalgamated.hpp"

#include "support.hpp"

#include <cmath>

using namespace cfq;
using namespace testing_support;

namespace {

double liouvillian_residual(const Operator& l, const Operator& h, const CVector& psi) {
    const LindbladSystem sys(h, {l});
    return max_abs(liouvillian_apply(sys, CMatrix(psi * psi.adjoint())));
}

}  // namespace

TEST_CASE("pure-steady check agrees with the Liouvillian fixed point", "[stability][property]") {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index d = 2 + i % 5;
        const auto p = plant_dark_state(d, rng);
        INFO("instance " << i << ", dim " << d);
        const auto yes = check_pure_steady(p.l, p.h, p.psi);
        CHECK(yes.steady);
        CHECK(liouvillian_residual(p.l, p.h, p.psi) <= 1e-8);

        // Breaking the Hamiltonian condition keeps psi an eigenvector of L only.
        const Operator h_bad = p.h + 1e-3 * random_hermitian(d, rng);
        const auto no = check_pure_steady(p.l, h_bad, p.psi);
        CHECK_FALSE(no.steady);
        CHECK(no.l_residual <= 1e-8);
        CHECK(liouvillian_residual(p.l, h_bad, p.psi) > 1e-8);

        const CVector other = random_ket(d, rng);
        CHECK(check_pure_steady(p.l, p.h, other).steady == (liouvillian_residual(p.l, p.h, other) <= 1e-8));
    }
}

TEST_CASE("ideal qubit target passes, ground state does not", "[stability]") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        const double kappa = uniform(rng, 0.1, 5.0), gamma = uniform(rng, 0.1, 5.0), phi = uniform(rng, -M_PI, M_PI);
        const auto g = models::qubit_cf_triple(kappa, gamma, phi);
        CHECK(check_pure_steady(g.l(), g.h(), models::qubit_target(kappa, gamma, phi)).steady);
        CHECK_FALSE(check_pure_steady(g.l(), g.h(), basis::qubit::ground()).steady);
    }
}

TEST_CASE("dark-state uniqueness matches the kernel dimension", "[stability]") {
    struct Case {
        std::string name;
        SLHTriple g;
        CVector dark;
    };
    const double k = 100.0, gm = 1.0, s = std::sqrt(k * gm);
    const auto basis3 = qutrit_dark_basis(k, gm);
    std::vector<Case> cases{
        {"qubit", models::qubit_cf_triple(0.8, 1.2, 0.5), models::qubit_target(0.8, 1.2, 0.5)},
        {"qubit z=0", models::qubit_cf_triple(0.25, 1.0, 0.0), models::qubit_target(0.25, 1.0, 0.0)},
        {"qutrit Phi1", models::qutrit_cf_triple(k, gm, -s / 2, 0.0), basis3.phi1},
        {"qutrit Phi2", models::qutrit_cf_triple(k, gm, 0.0, s / 2), basis3.phi2},
        {"qutrit Phi3", models::qutrit_cf_triple(k, gm, 0.0, s), basis3.phi3},
        // Dephasing only: both basis states are dark.
        {"dispersive only", SLHTriple(basis::qubit::sigma_z(), Operator::zero(2)), basis::qubit::excited()},
    };
    for (const auto& c : cases) {
        INFO(c.name);
        REQUIRE(check_pure_steady(c.g.l(), c.g.h(), c.dark).steady);
        const auto verdict = unique_dark_state_test(c.g.l(), {c.dark});
        REQUIRE(verdict.verdict != Uniqueness::inconclusive);
        CHECK(verdict.unique() == (kernel_dimension(LindbladSystem::from_slh(c.g)) == 1));
    }
}

TEST_CASE("uniqueness on planted systems with one or two dark states", "[stability][property]") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        const auto p = plant_dark_state(3, rng);
        const auto u = unique_dark_state_test(p.l, {p.psi});
        if (u.verdict == Uniqueness::inconclusive) continue;
        CHECK(u.unique() == (kernel_dimension(LindbladSystem(p.h, {p.l})) == 1));
    }
    // Block-diagonal (2 + 2): one planted dark state per block.
    for (int i = 0; i < 10; ++i) {
        const auto a = plant_dark_state(2, rng);
        const auto b = plant_dark_state(2, rng);
        CMatrix l = CMatrix::Zero(4, 4), h = CMatrix::Zero(4, 4);
        l.topLeftCorner(2, 2) = a.l.matrix();
        l.bottomRightCorner(2, 2) = b.l.matrix();
        h.topLeftCorner(2, 2) = a.h.matrix();
        h.bottomRightCorner(2, 2) = b.h.matrix();
        CVector psi = CVector::Zero(4);
        psi.head(2) = a.psi;
        const auto u = unique_dark_state_test(Operator(l), {psi});
        CHECK(u.verdict == Uniqueness::not_unique);
        CHECK(kernel_dimension(LindbladSystem(Operator(h), {Operator(l)})) >= 2);
    }
}

TEST_CASE("qutrit dark basis are eigenvectors of L", "[stability]") {
    const double k = 3.0, g = 0.7;
    const auto b = qutrit_dark_basis(k, g);
    const CMatrix l = models::qutrit_cf_triple(k, g, 0.0, 0.0).l().matrix();
    for (auto t : {QutritTarget::phi1, QutritTarget::phi2, QutritTarget::phi3}) {
        CHECK(std::abs(b[t].norm() - 1.0) < 1e-14);
        CHECK(eigen_residual(l, b[t]) < 1e-12);
    }
}

TEST_CASE("qutrit gains reproduce the closed forms", "[stability]") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 10; ++i) {
        const double k = uniform(rng, 1.0, 200.0), g = uniform(rng, 0.1, 5.0), s = std::sqrt(k * g);
        const auto g1 = solve_qutrit_gains(QutritTarget::phi1, k, g);
        const auto g2 = solve_qutrit_gains(QutritTarget::phi2, k, g);
        const auto g3 = solve_qutrit_gains(QutritTarget::phi3, k, g);
        CHECK(std::abs(g1.u1 + s / 2) <= 1e-12 * s);
        CHECK(g1.u2 == 0.0);
        CHECK(g2.u1 == 0.0);
        CHECK(std::abs(g2.u2 - s / 2) <= 1e-12 * s);
        CHECK(g3.u1 == 0.0);
        CHECK(std::abs(g3.u2 - s) <= 1e-12 * s);
    }
}

TEST_CASE("solved gains steer the loop to the target", "[stability]") {
    const double k = 100.0, g = 1.0;
    const auto b = qutrit_dark_basis(k, g);
    for (auto t : {QutritTarget::phi1, QutritTarget::phi2, QutritTarget::phi3}) {
        const auto gains = solve_qutrit_gains(t, k, g);
        CHECK(fidelity(b[t], steady_state(models::qutrit_cf(k, g, gains.u1, gains.u2))) >= 1.0 - 1e-6);
    }
}

TEST_CASE("detuning residual vanishes at zero and grows with detuning", "[stability]") {
    const double k = 100.0, g = 1.0, s = std::sqrt(k * g);
    for (auto t : {QutritTarget::phi1, QutritTarget::phi2, QutritTarget::phi3}) {
        const auto gains = solve_qutrit_gains(t, k, g);
        CHECK(detuning_robustness_residual(k, g, 0.0, 0.0, gains, t) <= 1e-10);
        for (double dir1 : {-1.0, 0.0, 1.0}) {
            for (double dir2 : {-1.0, 0.0, 1.0}) {
                double prev = 0.0;
                for (int step = 1; step <= 10; ++step) {
                    const double r = detuning_robustness_residual(k, g, dir1 * step * 0.1 * s, dir2 * step * 0.1 * s, gains, t);
                    CHECK(r >= prev - 1e-12);
                    prev = r;
                }
            }
        }
    }
    // |3> is an eigenvector of any diagonal detuning.
    const auto g3 = solve_qutrit_gains(QutritTarget::phi3, k, g);
    CHECK(detuning_robustness_residual(k, g, 3.0, -2.0, g3, QutritTarget::phi3) <= 1e-10);
}

TEST_CASE("stability argument errors", "[stability][errors]") {
    const Operator l = basis::qubit::sigma_minus();
    CHECK_THROWS_AS(check_pure_steady(l, Operator::zero(3), basis::qubit::ground()), DimensionMismatch);
    CHECK_THROWS_AS(check_pure_steady(l, Operator::zero(2), CVector::Ones(2)), InvalidArgument);
    CHECK_THROWS_AS(unique_dark_state_test(l, {}), InvalidArgument);
    CHECK_THROWS_AS(qutrit_dark_basis(0.0, 1.0), InvalidArgument);
}
