#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "otto/lindblad.hpp"
#include "otto/oracle.hpp"
#include "support/helpers.hpp"

using namespace otto;

namespace {

DensityMatrix basis_state(const char* bits) { return DensityMatrix::pure(ket(bits)); }

SuperOperator xx_local(double J, double B, double ga, double gb, double na, double nb) {
    return liouvillian(build_hamiltonian(HamiltonianParams::xx(J, B)), build_bath(BathSpec::local_thermal(ga, gb, na, nb)));
}

} // namespace

TEST(Dissipator, AnnihilatedState) {
    const JumpTerm t{on_a(pauli::minus()), 1.0, ""};
    EXPECT_LT(max_abs(dissipator_apply(t, basis_state("10"))), 1e-15);
}

TEST(Dissipator, Decay) {
    const JumpTerm t{on_a(pauli::minus()), 1.0, ""};
    const CMatrix expect = 2.0 * (basis_state("10").mat() - basis_state("00").mat());
    EXPECT_LT(max_abs(dissipator_apply(t, basis_state("00")) - expect), 1e-15);
}

TEST(Dissipator, TracelessAndHermitian) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        const JumpTerm t{support::random_complex(rng, 4, 4), 0.7, ""};
        const CMatrix d = dissipator_apply(t, support::random_state(rng));
        EXPECT_LT(std::abs(d.trace()), 1e-12);
        EXPECT_LT(hermiticity_error(d), 1e-12);
    }
}

TEST(Liouvillian, ZeroGenerator) { EXPECT_EQ(max_abs(liouvillian(CMatrix::Zero(4, 4), {}).mat), 0.0); }

TEST(Liouvillian, MatchesMasterEquation) {
    std::mt19937_64 rng(9);
    const CMatrix H = support::random_hermitian(rng, 4);
    std::vector<JumpTerm> terms;
    for (int k = 0; k < 3; ++k) terms.push_back({support::random_complex(rng, 4, 4), 0.3 * (k + 1), ""});
    const auto L = liouvillian(H, terms);
    const auto rho = support::random_state(rng);
    CMatrix direct = cplx(0, -1) * (H * rho.mat() - rho.mat() * H);
    for (const auto& t : terms) direct += dissipator_apply(t, rho);
    EXPECT_LT(max_abs(generate(L, rho.mat()) - direct), 1e-12);
    EXPECT_LT(trace_preservation_error(L), 1e-12);
}

TEST(Liouvillian, UnitarySpectrum) {
    std::mt19937_64 rng(10);
    const CMatrix H = support::random_hermitian(rng, 4);
    const RVector E = hermitian_eigenvalues(H);
    Eigen::ComplexEigenSolver<CMatrix> es(liouvillian(H, {}).mat, false);
    std::vector<cplx> expect;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) expect.push_back(cplx(0, -(E(j) - E(k))));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double best = 1e9;
        for (const auto& e : expect) best = std::min(best, std::abs(es.eigenvalues()(i) - e));
        EXPECT_LT(best, 1e-10);
    }
}

TEST(Liouvillian, RejectsNonHermitianHamiltonian) {
    CMatrix H = CMatrix::Zero(4, 4);
    H(0, 1) = 1.0;
    EXPECT_THROW(liouvillian(H, {}), NotHermitian);
}

TEST(SteadyState, EqualTemperatureXX) {
    for (double J : {0.0, 0.5, 2.0}) {
        const auto ss = steady_state(xx_local(J, 1.3, 1, 1, 1, 1));
        CMatrix expect = CMatrix::Zero(4, 4);
        expect.diagonal() << 1.0 / 9, 2.0 / 9, 2.0 / 9, 4.0 / 9;
        EXPECT_LT(max_abs(ss.state.mat() - expect), 1e-12);
        EXPECT_EQ(ss.nullspace_dim, 1u);
        EXPECT_LT(ss.residual, 1e-12);
    }
}

TEST(SteadyState, BellPumpGivesSinglet) {
    const auto L = liouvillian(build_hamiltonian(HamiltonianParams::ising(1)),
                               build_bath(BathSpec::composite(1, {BathSpec::common_dephasing(0), BathSpec::bell_pump(0)})));
    const auto ss = steady_state(L);
    EXPECT_LT(max_abs(ss.state.mat() - projector(support::bell_psi_minus())), 1e-10);
}

TEST(SteadyState, PureDephasingIsDegenerate) {
    const auto L = liouvillian(build_hamiltonian(HamiltonianParams::ising(1)), build_bath(BathSpec::common_dephasing(0)));
    EXPECT_EQ(nullspace_dimension(L), 2u);
    try {
        steady_state(L);
        FAIL() << "expected DegenerateSteadyState";
    } catch (const DegenerateSteadyState& e) {
        EXPECT_EQ(e.nullspace_dim(), 2u);
    }
}

TEST(SteadyState, AsymptoticLimitOfDegenerateDephasing) {
    const auto L = liouvillian(build_hamiltonian(HamiltonianParams::ising(1)), build_bath(BathSpec::common_dephasing(0)));
    const auto start = oracle::bell_pump_state(oracle::bell_pump_mu(0.5));
    const auto lim = asymptotic_state(L, start);
    CMatrix expect = CMatrix::Zero(4, 4);
    expect(1, 1) = expect(2, 2) = 0.5;
    EXPECT_LT(max_abs(lim.mat() - expect), 1e-12);
    EXPECT_LT(trace_distance(propagate(L, start, 40.0), lim), 1e-9);
}

TEST(SteadyState, AsymptoticRejectsUndampedModes) {
    // No dissipation: the unitary modes never decay.
    const auto L = liouvillian(build_hamiltonian(HamiltonianParams::xx(1, 2)), {});
    EXPECT_THROW(asymptotic_state(L, DensityMatrix::maximally_mixed(4)), DegenerateSteadyState);
}

TEST(SteadyState, UnequalTemperatureClosedFormGrid) {
    const double pts[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    const double occ[] = {0.0, 0.5, 1.0, 2.0, 3.0};
    double worst = 0.0;
    for (double J : {0.25, 0.5, 1.0, 2.0, 3.0})
        for (double ga : pts)
            for (double gb : pts)
                for (double na : occ)
                    for (double nb : occ) {
                        const auto ss = steady_state(xx_local(J, 0.9, ga, gb, na, nb));
                        const auto cf = oracle::xx_unequal_steady_state(J, ga, gb, na, nb);
                        worst = std::max(worst, max_abs(ss.state.mat() - cf.mat()));
                    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Propagate, ZeroTimeIsIdentity) {
    std::mt19937_64 rng(1);
    const auto rho = support::random_state(rng);
    const auto out = propagate(xx_local(1, 1, 1, 1, 1, 1), rho, 0.0);
    EXPECT_EQ(max_abs(out.mat() - rho.mat()), 0.0);
    EXPECT_THROW(propagate(xx_local(1, 1, 1, 1, 1, 1), rho, -1.0), OutOfRange);
}

TEST(Propagate, SingleQubitRelaxationRate) {
    const double g = 0.8, n = 1.5;
    auto spec = BathSpec::local_thermal(g, 0.0, n, 0.0);
    const auto L = liouvillian(CMatrix::Zero(4, 4), build_bath(spec));
    const auto rho = DensityMatrix::pure(ket("00"));
    const CMatrix sz = on_a(pauli::z());
    const double z_eq = -1.0 / (2 * n + 1), z0 = 1.0;
    for (double t : {0.1, 0.5, 2.0}) {
        const double z = expectation(propagate(L, rho, t).mat(), sz);
        EXPECT_NEAR(z, z_eq + (z0 - z_eq) * std::exp(-2 * g * (2 * n + 1) * t), 1e-12);
    }
}

TEST(Propagate, LongTimeReachesSteadyState) {
    std::mt19937_64 rng(12);
    const auto L = xx_local(1, 2, 0.5, 2, 1, 0.3);
    const auto ss = steady_state(L).state;
    EXPECT_LT(trace_distance(propagate(L, support::random_state(rng), 50.0 / 0.5), ss), 1e-8);
}

TEST(Propagate, SteadyStateIsFixedPoint) {
    const auto L = xx_local(0.7, 1.1, 0.3, 1.7, 2, 0.5);
    const auto ss = steady_state(L).state;
    for (double t : {1.0, 10.0}) EXPECT_LT(trace_distance(propagate(L, ss, t), ss), 1e-8);
}

TEST(Propagate, PreservesStateInvariantsOnRandomDraws) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int k = 0; k < 30; ++k) {
        const CMatrix H = support::random_hermitian(rng, 4);
        std::vector<JumpTerm> terms;
        for (int j = 0; j < 3; ++j) terms.push_back({support::random_complex(rng, 4, 4), u(rng), ""});
        const auto L = liouvillian(H, terms);
        const auto rho = support::random_state(rng);
        for (double t : {0.01, 0.3, 3.0}) {
            const Propagator P(L, t);
            const CMatrix raw = unvec(P.map() * vec(rho.mat()));
            EXPECT_NEAR(raw.trace().real(), 1.0, 1e-10);
            const auto out = P.apply(rho);
            EXPECT_GE(hermitian_eigenvalues(out.mat()).minCoeff(), -1e-8);
        }
    }
}
