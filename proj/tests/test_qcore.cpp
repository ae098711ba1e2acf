#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "otto/qcore.hpp"
#include "support/helpers.hpp"

using namespace otto;
using otto::support::random_hermitian;
using otto::support::random_state;

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_LT(max_abs(kron(pauli::identity(), pauli::identity()) - CMatrix::Identity(4, 4)), 1e-15);
}

TEST(Kron, BitFlipOnBothQubits) {
    const CVector out = kron(pauli::x(), pauli::x()) * ket("00");
    EXPECT_LT((out - ket("11")).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kron, CollectiveZSpectrum) {
    const RVector v = hermitian_eigenvalues(on_a(pauli::z()) + on_b(pauli::z()));
    ASSERT_EQ(v.size(), 4);
    EXPECT_NEAR(v(0), -2, 1e-12);
    EXPECT_NEAR(v(1), 0, 1e-12);
    EXPECT_NEAR(v(2), 0, 1e-12);
    EXPECT_NEAR(v(3), 2, 1e-12);
}

TEST(Kron, AssociativeAndBilinear) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const CMatrix a = support::random_complex(rng, 2, 2), b = support::random_complex(rng, 2, 3),
                      c = support::random_complex(rng, 3, 2), d = support::random_complex(rng, 2, 3);
        EXPECT_LT(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-12);
        const cplx s(0.3, -1.7);
        EXPECT_LT(max_abs(kron(a, s * b + d) - (s * kron(a, b) + kron(a, d))), 1e-12);
        EXPECT_LT(max_abs(kron(s * b + d, a) - (s * kron(b, a) + kron(d, a))), 1e-12);
    }
}

TEST(Eigensystem, PauliZ) {
    const auto es = hermitian_eigensystem(pauli::z());
    EXPECT_NEAR(es.values(0), -1, 1e-14);
    EXPECT_NEAR(es.values(1), 1, 1e-14);
}

TEST(Eigensystem, XXModelSpectrum) {
    CMatrix h = kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()) + 2.0 * (on_a(pauli::z()) + on_b(pauli::z()));
    const RVector v = hermitian_eigenvalues(h);
    const double expect[] = {-4, -2, 2, 4};
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(v(k), expect[k], 1e-12);
}

TEST(Eigensystem, CollectiveXField) {
    const RVector v = hermitian_eigenvalues(on_a(pauli::x()) + on_b(pauli::x()));
    const double expect[] = {-2, 0, 0, 2};
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(v(k), expect[k], 1e-12);
}

TEST(Eigensystem, RejectsNonHermitian) {
    CMatrix m = pauli::z();
    m(0, 1) = 1e-6;
    EXPECT_THROW(hermitian_eigensystem(m), NotHermitian);
}

TEST(Eigensystem, ReconstructionAndOrthonormality) {
    std::mt19937_64 rng(5);
    for (int dim : {2, 4, 16}) {
        for (int t = 0; t < 20; ++t) {
            const CMatrix m = random_hermitian(rng, dim);
            const auto es = hermitian_eigensystem(m);
            const CMatrix& V = es.vectors;
            EXPECT_LT(max_abs(V * es.values.cast<cplx>().asDiagonal() * V.adjoint() - m), 1e-10);
            EXPECT_LT(max_abs(V.adjoint() * V - CMatrix::Identity(dim, dim)), 1e-10);
            for (Eigen::Index k = 0; k < dim; ++k) {
                EXPECT_LT((m * V.col(k) - es.values(k) * V.col(k)).cwiseAbs().maxCoeff(), 1e-10);
                if (k > 0) {
                    EXPECT_LE(es.values(k - 1), es.values(k));
                }
            }
            // Independent check of the spectrum.
            Eigen::SelfAdjointEigenSolver<CMatrix> ref(m, Eigen::EigenvaluesOnly);
            EXPECT_LT((ref.eigenvalues() - es.values).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(Eigensystem, DeterministicUnderDegeneracy) {
    const CMatrix h = on_a(pauli::x()) + on_b(pauli::x());
    const auto a = hermitian_eigensystem(h);
    const auto b = hermitian_eigensystem(CMatrix(h));
    EXPECT_EQ(max_abs(a.vectors - b.vectors), 0.0);
}

TEST(DensityMatrixType, ValidatesInvariants) {
    EXPECT_NO_THROW(DensityMatrix(CMatrix::Identity(4, 4) / 4.0));
    EXPECT_THROW(DensityMatrix(CMatrix::Identity(4, 4)), InvalidState);
    EXPECT_THROW(DensityMatrix(CMatrix::Identity(3, 3) / 3.0), InvalidState);
    CMatrix neg = CMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{neg}, InvalidState);
    CMatrix nh = CMatrix::Identity(2, 2) / 2.0;
    nh(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{nh}, InvalidState);
}

TEST(PartialTrace, SingletReducesToMaximallyMixed) {
    const auto rho = DensityMatrix::pure(support::bell_psi_minus());
    for (auto keep : {Subsystem::a, Subsystem::b})
        EXPECT_LT(max_abs(partial_trace(rho, keep).mat() - CMatrix::Identity(2, 2) / 2.0), 1e-14);
}

TEST(PartialTrace, ProductStates) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const auto ra = random_state(rng, 2), rb = random_state(rng, 2);
        const DensityMatrix prod(kron(ra.mat(), rb.mat()));
        EXPECT_LT(max_abs(partial_trace(prod, Subsystem::a).mat() - ra.mat()), 1e-12);
        EXPECT_LT(max_abs(partial_trace(prod, Subsystem::b).mat() - rb.mat()), 1e-12);
    }
}

TEST(PartialTrace, DiagonalThermalState) {
    CMatrix d = CMatrix::Zero(4, 4);
    d.diagonal() << 1.0 / 9, 2.0 / 9, 2.0 / 9, 4.0 / 9;
    const CMatrix ra = partial_trace(DensityMatrix(d), Subsystem::a).mat();
    EXPECT_NEAR(ra(0, 0).real(), 1.0 / 3, 1e-14);
    EXPECT_NEAR(ra(1, 1).real(), 2.0 / 3, 1e-14);
    EXPECT_NEAR(std::abs(ra(0, 1)), 0.0, 1e-15);
}

TEST(TraceDistance, Examples) {
    const auto zero = DensityMatrix::pure(ket("0"));
    const auto one = DensityMatrix::pure(ket("1"));
    EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
    EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-14);
    EXPECT_NEAR(trace_distance(DensityMatrix::maximally_mixed(2), zero), 0.5, 1e-14);
}

TEST(TraceDistance, MetricProperties) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_state(rng), b = random_state(rng), c = random_state(rng);
        EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
        EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-12);
        EXPECT_GT(trace_distance(a, b), 0.0);
    }
}
