#pragma once
// Vectorized Lindblad generator, steady states and time propagation.
//
// vec() stacks columns, so vec(A rho B) = (B^T (x) A) vec(rho). Eigen matrices
// are column-major, which makes vec/unvec plain reinterpretations.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "otto/qcore.hpp"
#include "otto/system.hpp"

namespace otto {

inline CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

inline CMatrix unvec(const CVector& v) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

struct SuperOperator {
    CMatrix mat;
    Eigen::Index state_dim() const { return static_cast<Eigen::Index>(std::llround(std::sqrt(double(mat.rows())))); }
};

// g (2 a rho a^H - a^H a rho - rho a^H a)
inline CMatrix dissipator_apply(const JumpTerm& term, const CMatrix& rho) {
    const CMatrix ada = term.op.adjoint() * term.op;
    return term.rate * (2.0 * term.op * rho * term.op.adjoint() - ada * rho - rho * ada);
}

inline CMatrix dissipator_apply(const JumpTerm& term, const DensityMatrix& rho) {
    return dissipator_apply(term, rho.mat());
}

inline double trace_preservation_error(const SuperOperator& L) {
    const CVector tr = vec(CMatrix::Identity(L.state_dim(), L.state_dim()));
    return (tr.adjoint() * L.mat).cwiseAbs().maxCoeff();
}

inline SuperOperator liouvillian(const CMatrix& H, const std::vector<JumpTerm>& baths) {
    require_hermitian(H);
    const Eigen::Index n = H.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const cplx i(0.0, 1.0);
    CMatrix L = -i * (kron(id, H) - kron(H.transpose(), id));
    for (const auto& term : baths) {
        if (term.op.rows() != n || term.op.cols() != n) throw InvalidSpec("jump operator dimension mismatch");
        const CMatrix ada = term.op.adjoint() * term.op;
        L += term.rate * (2.0 * kron(term.op.conjugate(), term.op) - kron(id, ada) - kron(ada.transpose(), id));
    }
    SuperOperator out{std::move(L)};
    if (trace_preservation_error(out) > 1e-10) throw NumericalFailure("Liouvillian is not trace preserving");
    return out;
}

inline CMatrix generate(const SuperOperator& L, const CMatrix& rho) { return unvec(L.mat * vec(rho)); }

struct SteadyStateResult {
    DensityMatrix state;
    double residual = 0.0;
    std::size_t nullspace_dim = 1;
};

namespace detail {

struct NullSpace {
    Eigen::JacobiSVD<CMatrix> svd;
    std::size_t dim = 0;
};

inline NullSpace null_space(const SuperOperator& L) {
    NullSpace ns{Eigen::JacobiSVD<CMatrix>(L.mat, Eigen::ComputeFullU | Eigen::ComputeFullV), 0};
    const RVector& s = ns.svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (!(s(k) >= 1e-10 * smax) || smax == 0.0) ++ns.dim;
    return ns;
}

inline DensityMatrix finish_state(const SuperOperator& L, CMatrix rho, double& residual) {
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw NumericalFailure("null vector has vanishing trace");
    rho = hermitize(rho / tr);
    residual = max_abs(generate(L, rho));
    if (residual > 1e-9) throw NumericalFailure("steady-state residual " + std::to_string(residual));
    try {
        return DensityMatrix(std::move(rho));
    } catch (const InvalidState& e) {
        throw NumericalFailure(std::string("steady state is not a valid density matrix: ") + e.what());
    }
}

} // namespace detail

inline std::size_t nullspace_dimension(const SuperOperator& L) { return detail::null_space(L).dim; }

// Unique steady state from the one-dimensional kernel of L.
inline SteadyStateResult steady_state(const SuperOperator& L) {
    const auto ns = detail::null_space(L);
    if (ns.dim == 0) throw NumericalFailure("Liouvillian has no null vector");
    if (ns.dim > 1) throw DegenerateSteadyState(ns.dim);
    const Eigen::Index last = L.mat.cols() - 1;
    double residual = 0.0;
    DensityMatrix state = detail::finish_state(L, unvec(ns.svd.matrixV().col(last)), residual);
    return {std::move(state), residual, 1};
}

// Long-time limit of propagate(L, rho, t). Equals steady_state() when the
// kernel is one-dimensional; otherwise applies the spectral projector onto the
// kernel. Throws DegenerateSteadyState if the limit does not exist (Jordan
// structure at zero or undamped oscillating modes).
inline DensityMatrix asymptotic_state(const SuperOperator& L, const DensityMatrix& rho) {
    const auto ns = detail::null_space(L);
    if (ns.dim == 0) throw NumericalFailure("Liouvillian has no null vector");
    if (ns.dim == 1) return steady_state(L).state;

    const auto k = static_cast<Eigen::Index>(ns.dim);
    const CMatrix right = ns.svd.matrixV().rightCols(k);
    const CMatrix left = ns.svd.matrixU().rightCols(k);
    const CMatrix overlap = left.adjoint() * right;
    Eigen::FullPivLU<CMatrix> lu(overlap);
    if (!lu.isInvertible()) throw DegenerateSteadyState(ns.dim);

    const double scale = ns.svd.singularValues()(0);
    Eigen::ComplexEigenSolver<CMatrix> spectrum(L.mat, false);
    std::size_t zero_modes = 0;
    for (Eigen::Index j = 0; j < spectrum.eigenvalues().size(); ++j) {
        const cplx lam = spectrum.eigenvalues()(j);
        if (std::abs(lam) < 1e-8 * scale) ++zero_modes;
        else if (lam.real() > -1e-8 * scale) throw DegenerateSteadyState(ns.dim);
    }
    if (zero_modes != ns.dim) throw DegenerateSteadyState(ns.dim);

    const CVector limit = right * lu.solve(left.adjoint() * vec(rho.mat()));
    double residual = 0.0;
    return detail::finish_state(L, unvec(limit), residual);
}

// exp(L t), cached for repeated application.
class Propagator {
public:
    Propagator(const SuperOperator& L, double t) {
        if (!(t >= 0.0)) throw OutOfRange("propagation time must be non-negative");
        map_ = t == 0.0 ? CMatrix::Identity(L.mat.rows(), L.mat.cols()) : CMatrix((L.mat * t).exp());
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        CMatrix m = unvec(map_ * vec(rho.mat()));
        const CMatrix h = hermitize(m);
        const double herm_fix = max_abs(m - h);
        const double trace_fix = std::abs(h.trace() - cplx(1.0));
        if (herm_fix > 1e-9 || trace_fix > 1e-9)
            throw NumericalFailure("propagation drifted beyond 1e-9 (hermiticity " + std::to_string(herm_fix) +
                                   ", trace " + std::to_string(trace_fix) + ")");
        m = h / h.trace().real();
        const double lo = hermitian_eigenvalues(m).minCoeff();
        if (lo < -1e-8) throw NumericalFailure("propagation lost positivity: eigenvalue " + std::to_string(lo));
        try {
            return DensityMatrix(std::move(m));
        } catch (const InvalidState& e) {
            throw NumericalFailure(std::string("propagated state invalid: ") + e.what());
        }
    }

    const CMatrix& map() const noexcept { return map_; }

private:
    CMatrix map_;
};

inline DensityMatrix propagate(const SuperOperator& L, const DensityMatrix& rho, double t) {
    if (t == 0.0) return rho;
    return Propagator(L, t).apply(rho);
}

} // namespace otto
