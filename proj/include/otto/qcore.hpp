#pragma once
// Dense complex linear algebra for one- and two-qubit problems.
//
// Basis convention: |00>, |01>, |10>, |11>, qubit a is the left (slow) tensor
// factor. sigma_z = diag(1, -1), so |0> is the upper level for positive field.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otto/errors.hpp"

namespace otto {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

enum class Subsystem { a, b };

inline const char* to_string(Subsystem s) { return s == Subsystem::a ? "a" : "b"; }

inline double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_error(const CMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return max_abs(m - m.adjoint());
}

inline CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline void require_hermitian(const CMatrix& m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) throw NotHermitian(INFINITY);
    const double err = hermiticity_error(m);
    if (err > tol) throw NotHermitian(err);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double expectation(const CMatrix& rho, const CMatrix& op) {
    return (rho * op).trace().real();
}

namespace pauli {

inline CMatrix identity() { return CMatrix::Identity(2, 2); }

inline CMatrix x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix y() {
    CMatrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline CMatrix z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// (sigma_x + i sigma_y) / 2 = |0><1|: raises toward the sigma_z = +1 level.
inline CMatrix plus() { return 0.5 * (x() + cplx(0, 1) * y()); }

// (sigma_x - i sigma_y) / 2 = |1><0|.
inline CMatrix minus() { return 0.5 * (x() - cplx(0, 1) * y()); }

} // namespace pauli

inline CMatrix on_a(const CMatrix& op) { return kron(op, pauli::identity()); }
inline CMatrix on_b(const CMatrix& op) { return kron(pauli::identity(), op); }

// Computational basis ket for a bit string such as "01".
inline CVector ket(const std::string& bits) {
    std::size_t index = 0;
    for (char c : bits) index = 2 * index + (c == '1' ? 1 : 0);
    CVector v = CVector::Zero(Eigen::Index(1) << bits.size());
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EigenSystem {
    RVector values;  // ascending
    CMatrix vectors; // orthonormal columns, vectors.col(k) belongs to values(k)
};

namespace detail {

// Fix the global phase so the first largest-magnitude component is real and
// positive. Makes output independent of rotation order for simple eigenvalues.
inline void canonical_phase(Eigen::Ref<CVector> v) {
    double largest = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v(i)));
    if (largest == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= largest - 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

inline bool rounded_less(const CVector& lhs, const CVector& rhs) {
    auto key = [](double x) { return std::llround(x * 1e8); };
    for (Eigen::Index i = 0; i < lhs.size(); ++i) {
        const auto lr = key(lhs(i).real()), rr = key(rhs(i).real());
        if (lr != rr) return lr < rr;
        const auto li = key(lhs(i).imag()), ri = key(rhs(i).imag());
        if (li != ri) return li < ri;
    }
    return false;
}

} // namespace detail

// Cyclic complex Jacobi. Each rotation is a phase-adjusted real Givens rotation
// that annihilates one off-diagonal pair; sweeps run until the off-diagonal
// Frobenius mass is at roundoff level.
inline EigenSystem hermitian_eigensystem(const CMatrix& m) {
    require_hermitian(m);
    const Eigen::Index n = m.rows();
    CMatrix a = hermitize(m);
    CMatrix v = CMatrix::Identity(n, n);

    const double scale = a.norm();
    if (scale > 0.0) {
        constexpr int kMaxSweeps = 100;
        int sweep = 0;
        for (; sweep < kMaxSweeps; ++sweep) {
            double off = 0.0;
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
            if (std::sqrt(off) <= 1e-16 * scale) break;

            for (Eigen::Index p = 0; p < n; ++p) {
                for (Eigen::Index q = p + 1; q < n; ++q) {
                    const cplx z = a(p, q);
                    const double az = std::abs(z);
                    if (az <= 1e-300) continue;
                    const cplx ph = z / az;
                    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * az);
                    const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    const cplx gpq = s * ph;
                    const cplx gqp = -s * std::conj(ph);

                    // a <- a * G
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const cplx akp = a(k, p), akq = a(k, q);
                        a(k, p) = c * akp + gqp * akq;
                        a(k, q) = gpq * akp + c * akq;
                    }
                    // a <- G^H * a
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const cplx apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk + std::conj(gqp) * aqk;
                        a(q, k) = std::conj(gpq) * apk + c * aqk;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    a(p, p) = a(p, p).real();
                    a(q, q) = a(q, q).real();
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const cplx vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp + gqp * vkq;
                        v(k, q) = gpq * vkp + c * vkq;
                    }
                }
            }
        }
        if (sweep == kMaxSweeps) throw NumericalFailure("Jacobi eigensolver did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (Eigen::Index k = 0; k < n; ++k) detail::canonical_phase(v.col(k));
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

    // Ties: order eigenvectors inside each cluster of equal eigenvalues.
    const double tie_tol = 1e-12 * std::max(1.0, scale);
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo + 1;
        while (hi < order.size() && a(order[hi], order[hi]).real() - a(order[lo], order[lo]).real() <= tie_tol) ++hi;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(hi),
                         [&](Eigen::Index i, Eigen::Index j) {
                             return detail::rounded_less(v.col(i), v.col(j));
                         });
        lo = hi;
    }

    EigenSystem out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

inline RVector hermitian_eigenvalues(const CMatrix& m) { return hermitian_eigensystem(m).values; }

// f(M) = V f(Lambda) V^H for Hermitian M.
template <class F>
CMatrix hermitian_function(const CMatrix& m, F&& f) {
    const EigenSystem es = hermitian_eigensystem(m);
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
        out += cplx(f(es.values(k))) * es.vectors.col(k) * es.vectors.col(k).adjoint();
    return out;
}

// ---------------------------------------------------------------------------
// Density matrices

inline constexpr double kStateHermitianTol = 1e-12;
inline constexpr double kStateTraceTol = 1e-12;
inline constexpr double kStateMinEigenvalue = -1e-10;

class DensityMatrix {
public:
    // Validates Hermiticity, unit trace and positivity; throws InvalidState.
    explicit DensityMatrix(CMatrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols() || (mat_.rows() != 2 && mat_.rows() != 4))
            throw InvalidState("density matrix must be 2x2 or 4x4");
        const double herr = hermiticity_error(mat_);
        if (herr > kStateHermitianTol) throw InvalidState("density matrix not Hermitian: " + std::to_string(herr));
        const cplx tr = mat_.trace();
        if (std::abs(tr - cplx(1.0)) > kStateTraceTol)
            throw InvalidState("density matrix trace " + std::to_string(tr.real()) + " != 1");
        const double lo = hermitian_eigenvalues(mat_).minCoeff();
        if (lo < kStateMinEigenvalue) throw InvalidState("density matrix not positive: eigenvalue " + std::to_string(lo));
    }

    // Hermitizes and renormalizes before validating.
    static DensityMatrix normalized(const CMatrix& m) {
        CMatrix h = hermitize(m);
        const double tr = h.trace().real();
        if (!(std::abs(tr) > 0.0)) throw InvalidState("cannot normalize a traceless matrix");
        h /= tr;
        return DensityMatrix(std::move(h));
    }

    static DensityMatrix pure(const CVector& psi) { return normalized(psi * psi.adjoint()); }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(CMatrix::Identity(dim, dim) / double(dim));
    }

    const CMatrix& mat() const noexcept { return mat_; }
    Eigen::Index dim() const noexcept { return mat_.rows(); }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

private:
    CMatrix mat_;
};

// Reduced state of the kept qubit of a two-qubit state.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    if (rho.dim() != 4) throw InvalidState("partial_trace needs a two-qubit state");
    const CMatrix& m = rho.mat();
    CMatrix out = CMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                out(i, j) += keep == Subsystem::a ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
    return DensityMatrix::normalized(out);
}

inline double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw InvalidState("trace_distance: dimension mismatch");
    return 0.5 * hermitian_eigenvalues(hermitize(rho - sigma)).cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return trace_distance(rho.mat(), sigma.mat());
}

} // namespace otto
