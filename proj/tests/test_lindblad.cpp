#include "catch_amalgamated.hpp"

#include "support.hpp"

#include <cmath>

using namespace cfq;
using namespace testing_support;

namespace {

LindbladSystem random_system(Eigen::Index d, std::size_t channels, std::mt19937_64& rng) {
    std::vector<Operator> ls;
    for (std::size_t k = 0; k < channels; ++k) ls.push_back(random_operator(d, rng));
    return LindbladSystem(random_hermitian(d, rng), std::move(ls));
}

// Dissipator written term by term: -i[H,ρ] + Σ (LρL† - ½{L†L, ρ}).
CMatrix textbook_rhs(const LindbladSystem& sys, const CMatrix& rho) {
    const CMatrix& h = sys.hamiltonian().matrix();
    CMatrix out = -kI * (h * rho - rho * h);
    for (const auto& op : sys.channels()) {
        const CMatrix& l = op.matrix();
        const CMatrix ll = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
    }
    return out;
}

}  // namespace

TEST_CASE("liouvillian_apply agrees with the textbook dissipator", "[lindblad]") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        const auto sys = random_system(2 + i % 5, 1 + i % 3, rng);
        const auto rho = random_state(sys.dim(), rng);
        const Operator d = liouvillian_apply(sys, rho);
        CHECK(max_abs(d.matrix() - textbook_rhs(sys, rho.matrix())) <= 1e-10);
        CHECK(std::abs(d.matrix().trace()) <= 1e-10);
        CHECK(d.hermiticity_error() <= 1e-10);
    }
}

TEST_CASE("liouvillian_apply closed-form cases", "[lindblad]") {
    const auto rho = DensityMatrix::pure(basis::qubit::excited());
    const LindbladSystem empty(Operator::zero(2), {});
    CHECK(max_abs(liouvillian_apply(empty, rho).matrix()) == 0.0);

    const double gamma = 0.8;
    const LindbladSystem decay(Operator::zero(2), {std::sqrt(gamma) * basis::qubit::sigma_minus()});
    CMatrix expect = CMatrix::Zero(2, 2);
    expect(basis::qubit::kGround, basis::qubit::kGround) = gamma;
    expect(basis::qubit::kExcited, basis::qubit::kExcited) = -gamma;
    CHECK(max_abs(liouvillian_apply(decay, rho).matrix() - expect) <= 1e-15);

    const double kappa = 0.6, g = 1.4, phi = 0.9;
    const auto sys = models::qubit_cf(kappa, g, phi);
    const auto psi = DensityMatrix::pure(models::qubit_target(kappa, g, phi));
    CHECK(max_abs(liouvillian_apply(sys, psi).matrix()) <= 1e-10);

    CHECK_THROWS_AS(liouvillian_apply(decay, DensityMatrix::maximally_mixed(3)), DimensionMismatch);
}

TEST_CASE("superoperator matrix matches liouvillian_apply", "[lindblad][property]") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index d = 2 + i % 5;
        const auto sys = random_system(d, 1 + i % 2, rng);
        const CMatrix m = liouvillian_matrix(sys);
        REQUIRE(m.rows() == d * d);
        const auto rho = random_state(d, rng);
        const CVector lhs = m * vec(rho.matrix());
        CHECK(max_abs(unvec(lhs, d) - liouvillian_apply(sys, rho).matrix()) <= 1e-10);
    }
}

TEST_CASE("unitary generator has an imaginary spectrum", "[lindblad]") {
    CMatrix h = CMatrix::Zero(3, 3);
    h.diagonal() << 0.3, -1.1, 2.0;
    const LindbladSystem sys{Operator(h), {}};
    Eigen::ComplexEigenSolver<CMatrix> es(liouvillian_matrix(sys));
    CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("superoperator cap", "[lindblad][errors]") {
    const LindbladSystem sys(Operator::zero(5), {});
    CHECK_THROWS_AS(liouvillian_matrix(sys, 24), InvalidArgument);
    CHECK_NOTHROW(liouvillian_matrix(sys, 25));
}

TEST_CASE("kernel dimension of the ideal loops", "[lindblad]") {
    const auto qubit = analyze_kernel(models::qubit_cf(1.0, 1.0, 0.0));
    CHECK(qubit.kernel_dim == 1);
    // rank dim² - 1: the next singular value is far above the threshold.
    CHECK(qubit.singular_values(2) > 1e-3 * qubit.singular_values(0));

    const double kappa = 100.0, gamma = 1.0;
    const auto qutrit = models::qutrit_cf(kappa, gamma, -std::sqrt(kappa * gamma) / 2.0, 0.0);
    CHECK(kernel_dimension(qutrit) == 1);

    const LindbladSystem closed(basis::qubit::sigma_z(), {});
    CHECK(kernel_dimension(closed) == 2);
    CHECK_THROWS_AS(steady_state(closed), DegenerateKernel);
    try {
        steady_state(closed);
    } catch (const DegenerateKernel& e) {
        CHECK(e.kernel_dim() == 2);
    }
}

TEST_CASE("steady state is a fixed point and matches the closed form", "[lindblad]") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        const auto sys = random_system(2 + i % 4, 2, rng);
        const auto rho = steady_state(sys);
        CHECK(max_abs(liouvillian_apply(sys, rho.matrix())) <= 1e-9);
        CHECK(rho.trace_error() <= 1e-12);
        CHECK(rho.min_eigenvalue() >= -1e-12);
    }
    const double kappa = 2.0, gamma = 0.5;
    const auto rho = steady_state(models::qutrit_cf(kappa, gamma, 0.0, 0.0));
    CHECK(max_abs(rho.matrix() - scenarios::qutrit_uncontrolled_closed_form(kappa, gamma)) <= 1e-10);
}

TEST_CASE("density matrix validation", "[lindblad][errors]") {
    CMatrix m = CMatrix::Identity(2, 2) / 2.0;
    CHECK_NOTHROW(DensityMatrix(m));
    CMatrix bad_trace = m * 1.1;
    CHECK_THROWS_AS(DensityMatrix(bad_trace), InvalidArgument);
    CMatrix bad_herm = m;
    bad_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(bad_herm), InvalidArgument);
    CMatrix negative = CMatrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(negative), InvalidArgument);
    CHECK_THROWS_AS(DensityMatrix(CMatrix::Zero(2, 3)), DimensionMismatch);
    CHECK_THROWS_AS(DensityMatrix::pure(CVector::Ones(2)), InvalidArgument);
}
