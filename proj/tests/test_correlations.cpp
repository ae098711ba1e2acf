#include <gtest/gtest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "otto/correlations.hpp"
#include "otto/oracle.hpp"
#include "support/helpers.hpp"

using namespace otto;

namespace {

DensityMatrix singlet() { return DensityMatrix::pure(support::bell_psi_minus()); }

DensityMatrix diag_state(double a, double b, double c, double d) {
    CMatrix m = CMatrix::Zero(4, 4);
    m.diagonal() << a, b, c, d;
    return DensityMatrix::normalized(m);
}

// Concurrence straight from the eigenvalues of rho * flip(rho).
double concurrence_reference(const DensityMatrix& rho) {
    Eigen::ComplexEigenSolver<CMatrix> es(rho.mat() * spin_flip(rho.mat()), false);
    std::vector<double> s;
    for (Eigen::Index k = 0; k < 4; ++k) s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(k).real())));
    std::sort(s.begin(), s.end(), std::greater<>());
    return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

double entropy_reference(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-12) s -= p * std::log2(p);
    }
    return s;
}

double entropy_fixed(const Eigen::Matrix2cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
    double s = 0;
    for (int k = 0; k < 2; ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-12) s -= p * std::log2(p);
    }
    return s;
}

// Discord by dense angle grid: the conditional state of the other qubit is
// (<v| (x) I) rho (|v> (x) I), formed with explicit embedding matrices.
double discord_brute_force(const DensityMatrix& rho, Subsystem measured, int n) {
    const Eigen::Matrix4cd m = rho.mat();
    const double info = mutual_information(rho);
    const double s_other = entropy_reference(partial_trace(rho, measured == Subsystem::a ? Subsystem::b : Subsystem::a).mat());
    double best = 1e9;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double th = std::numbers::pi * i / (n - 1), ph = 2 * std::numbers::pi * j / n;
            double ce = 0;
            for (const CVector& v : bloch_basis(th, ph)) {
                Eigen::Matrix<cplx, 4, 2> E = Eigen::Matrix<cplx, 4, 2>::Zero();
                for (int k = 0; k < 2; ++k)
                    for (int r = 0; r < 2; ++r) {
                        if (measured == Subsystem::a) E(2 * k + r, r) = v(k);
                        else E(2 * r + k, r) = v(k);
                    }
                const Eigen::Matrix2cd blk = E.adjoint() * m * E;
                const double p = blk.trace().real();
                if (p < 1e-14) continue;
                ce += p * entropy_fixed(blk / p);
            }
            best = std::min(best, ce);
        }
    return std::max(0.0, info - (s_other - best));
}

} // namespace

TEST(Concurrence, Examples) {
    EXPECT_NEAR(concurrence(singlet()), 1.0, 1e-10);
    EXPECT_NEAR(concurrence(DensityMatrix::pure(ket("00"))), 0.0, 1e-12);
    EXPECT_NEAR(concurrence(oracle::bell_pump_state(-1.0 / 18)), 1.0 / 9, 1e-10);
}

TEST(Concurrence, MatchesEigenvalueDefinition) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
        const int rank = 1 + k % 4;
        const auto rho = support::random_state(rng, 4, rank);
        // Zero eigenvalues enter through a square root, so rank-deficient states lose half the digits.
        EXPECT_NEAR(concurrence(rho), concurrence_reference(rho), rank == 4 ? 1e-9 : 1e-7);
    }
}

TEST(Concurrence, SeparableMixturesHaveNone) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 50; ++k) {
        CMatrix m = CMatrix::Zero(4, 4);
        std::uniform_real_distribution<double> u(0, 1);
        for (int j = 0; j < 4; ++j)
            m += u(rng) * kron(support::random_state(rng, 2).mat(), support::random_state(rng, 2).mat());
        EXPECT_LT(concurrence(DensityMatrix::normalized(m)), 1e-9);
    }
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(ket("01"))), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(2)), 1.0, 1e-12);
    const double p[] = {1.0 / 9, 2.0 / 9, 2.0 / 9, 4.0 / 9};
    double s = 0;
    for (double x : p) s -= x * std::log2(x);
    EXPECT_NEAR(von_neumann_entropy(diag_state(1, 2, 2, 4)), s, 1e-12);
    EXPECT_NEAR(s, 1.8366, 1e-4);
}

TEST(MutualInformation, Examples) {
    std::mt19937_64 rng(23);
    const DensityMatrix prod(kron(support::random_state(rng, 2).mat(), support::random_state(rng, 2).mat()));
    EXPECT_NEAR(mutual_information(prod), 0.0, 1e-10);
    EXPECT_NEAR(mutual_information(singlet()), 2.0, 1e-10);
    EXPECT_NEAR(mutual_information(diag_state(1, 0, 0, 1)), 1.0, 1e-12);
}

TEST(Discord, ProductAndClassicalStates) {
    EXPECT_NEAR(quantum_discord(DensityMatrix::pure(ket("00"))).discord, 0.0, 1e-9);
    for (double n : {0.0, 0.5, 1.0, 3.0}) {
        const auto r = quantum_discord(diag_state(n * n, n * (1 + n), n * (1 + n), (1 + n) * (1 + n)));
        EXPECT_LT(r.discord, 1e-6);
    }
}

TEST(Discord, Singlet) {
    const auto r = quantum_discord(singlet());
    EXPECT_NEAR(r.discord, 1.0, 1e-3);
    EXPECT_NEAR(r.mutual_information, 2.0, 1e-9);
    EXPECT_NEAR(discord_brute_force(singlet(), Subsystem::a, 65), 1.0, 1e-3);
}

TEST(Discord, ResultInvariants) {
    std::mt19937_64 rng(24);
    for (int k = 0; k < 20; ++k) {
        const auto rho = support::random_state(rng, 4, 1 + k % 4);
        for (auto s : {Subsystem::a, Subsystem::b}) {
            const auto r = quantum_discord(rho, s);
            EXPECT_NEAR(r.discord + r.classical, r.mutual_information, 1e-6);
            EXPECT_GE(r.discord, 0.0);
            EXPECT_LE(r.discord, r.mutual_information + 1e-9);
            EXPECT_GE(r.theta, 0.0);
            EXPECT_LE(r.theta, std::numbers::pi);
            EXPECT_GE(r.phi, 0.0);
            EXPECT_LT(r.phi, 2 * std::numbers::pi);
            EXPECT_EQ(r.measured, s);
        }
    }
}

TEST(Discord, InvariantUnderUnitaryOnUnmeasuredQubit) {
    std::mt19937_64 rng(25);
    for (int k = 0; k < 10; ++k) {
        const auto rho = support::random_state(rng);
        const CMatrix U = kron(pauli::identity(), support::random_unitary(rng, 2));
        const auto rotated = DensityMatrix::normalized(U * rho.mat() * U.adjoint());
        EXPECT_NEAR(quantum_discord(rho, Subsystem::a).discord, quantum_discord(rotated, Subsystem::a).discord, 1e-5);
    }
}

TEST(Discord, BellDiagonalSymmetricUnderSwap) {
    for (double mu : {-0.5, -0.3, -1.0 / 18, -0.01, 0.0}) {
        const auto rho = oracle::bell_pump_state(mu);
        EXPECT_NEAR(quantum_discord(rho, Subsystem::a).discord, quantum_discord(rho, Subsystem::b).discord, 1e-5);
    }
}

TEST(Discord, MatchesDenseGrid) {
    std::mt19937_64 rng(26);
    for (int k = 0; k < 20; ++k) {
        const auto rho = support::random_state(rng, 4, 1 + k % 4);
        const auto s = k % 2 ? Subsystem::b : Subsystem::a;
        EXPECT_NEAR(quantum_discord(rho, s).discord, discord_brute_force(rho, s, 512), 1e-4);
    }
}

TEST(Discord, AngleNormalization) {
    const auto [t1, p1] = normalize_angles(-0.3, 0.2);
    EXPECT_NEAR(t1, 0.3, 1e-15);
    EXPECT_NEAR(p1, 0.2 + std::numbers::pi, 1e-15);
    const auto [t2, p2] = normalize_angles(2 * std::numbers::pi - 0.5, -0.1);
    EXPECT_NEAR(t2, 0.5, 1e-14);
    EXPECT_NEAR(p2, std::numbers::pi - 0.1, 1e-14);
}
