#pragma once
// Entanglement and correlation measures for two-qubit states. Entropies in bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <tuple>
#include <utility>

#include "otto/qcore.hpp"

namespace otto {

namespace detail {

inline double xlog2x(double p) { return p > 1e-12 ? -p * std::log2(p) : 0.0; }

// Entropy of a 2x2 Hermitian PSD block with trace tr, from its closed-form eigenvalues.
inline double entropy_2x2(cplx a, cplx b, cplx d) {
    const double t = (a + d).real();
    const double diff = (a - d).real();
    const double r = std::sqrt(diff * diff + 4.0 * std::norm(b));
    return xlog2x(0.5 * (t + r)) + xlog2x(0.5 * (t - r));
}

} // namespace detail

// Spin-flipped state (sy (x) sy) rho^* (sy (x) sy), conjugation in the computational basis.
inline CMatrix spin_flip(const CMatrix& rho) {
    const CMatrix yy = kron(pauli::y(), pauli::y());
    return yy * rho.conjugate() * yy;
}

// With rho = W W^H (W = V sqrt(p)), the lambda_i are the singular values of
// W^T (sy (x) sy) W. Weights at the eigenvalue noise floor are dropped.
inline double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw InvalidState("concurrence needs a two-qubit state");
    const EigenSystem es = hermitian_eigensystem(rho.mat());
    CMatrix W = CMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
        if (es.values(k) > 1e-14) W.col(k) = std::sqrt(es.values(k)) * es.vectors.col(k);
    const CMatrix T = W.transpose() * kron(pauli::y(), pauli::y()) * W;
    const RVector s = Eigen::JacobiSVD<CMatrix>(T).singularValues(); // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
    const RVector lam = hermitian_eigenvalues(rho.mat());
    double s = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) s += detail::xlog2x(lam(k));
    return s;
}

inline double mutual_information(const DensityMatrix& rho) {
    const double i = von_neumann_entropy(partial_trace(rho, Subsystem::a)) +
                     von_neumann_entropy(partial_trace(rho, Subsystem::b)) - von_neumann_entropy(rho);
    return i < 0.0 && i > -1e-12 ? 0.0 : i;
}

// Measurement basis |n+> = (cos t/2, e^{ip} sin t/2), |n-> orthogonal.
inline std::array<CVector, 2> bloch_basis(double theta, double phi) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const cplx e = std::polar(1.0, phi);
    CVector up(2), down(2);
    up << c, e * s;
    down << -std::conj(e) * s, c;
    return {up, down};
}

// Maps any (theta, phi) to the equivalent angles with theta in [0, pi], phi in [0, 2 pi).
inline std::pair<double, double> normalize_angles(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
        theta = two_pi - theta;
        phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return {theta, phi};
}

// sum_i p_i S(rho_i) after projecting the measured qubit onto the Bloch basis.
inline double conditional_entropy(const DensityMatrix& rho, Subsystem measured, double theta, double phi) {
    const CMatrix& m = rho.mat();
    double total = 0.0;
    for (const CVector& n : bloch_basis(theta, phi)) {
        // Unnormalized conditional state of the other qubit, p_i rho_i.
        cplx blk[2][2] = {};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const cplx w = std::conj(n(i)) * n(j);
                        blk[r][c] += w * (measured == Subsystem::a ? m(2 * i + r, 2 * j + c) : m(2 * r + i, 2 * c + j));
                    }
        const double p = (blk[0][0] + blk[1][1]).real();
        if (p <= 1e-14) continue;
        // p S(X/p) = S_unnormalized(X) + p log2 p
        total += detail::entropy_2x2(blk[0][0], blk[0][1], blk[1][1]) - detail::xlog2x(p);
    }
    return total;
}

struct DiscordResult {
    double discord = 0.0;
    double classical = 0.0;
    double mutual_information = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    Subsystem measured = Subsystem::a;
};

namespace detail {

// Downhill simplex in two variables. Returns the best vertex.
template <class F>
std::array<double, 3> nelder_mead_2d(F&& f, double x0, double y0, double dx, double dy, double ftol, int max_iter) {
    using P = std::array<double, 3>; // x, y, f
    std::array<P, 3> s{P{x0, y0, f(x0, y0)}, P{x0 + dx, y0, f(x0 + dx, y0)}, P{x0, y0 + dy, f(x0, y0 + dy)}};
    auto eval = [&](double x, double y) { return P{x, y, f(x, y)}; };
    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const P& a, const P& b) { return a[2] < b[2]; });
        const double size = std::max(std::abs(s[1][0] - s[0][0]) + std::abs(s[1][1] - s[0][1]),
                                     std::abs(s[2][0] - s[0][0]) + std::abs(s[2][1] - s[0][1]));
        if (s[2][2] - s[0][2] <= ftol && size < 1e-9) break;
        const double cx = 0.5 * (s[0][0] + s[1][0]), cy = 0.5 * (s[0][1] + s[1][1]);
        const P r = eval(cx + (cx - s[2][0]), cy + (cy - s[2][1]));
        if (r[2] < s[0][2]) {
            const P e = eval(cx + 2.0 * (cx - s[2][0]), cy + 2.0 * (cy - s[2][1]));
            s[2] = e[2] < r[2] ? e : r;
        } else if (r[2] < s[1][2]) {
            s[2] = r;
        } else {
            const bool outside = r[2] < s[2][2];
            const P& ref = outside ? r : s[2];
            const P c = eval(cx + 0.5 * (ref[0] - cx), cy + 0.5 * (ref[1] - cy));
            if (c[2] < ref[2]) {
                s[2] = c;
            } else {
                for (int k = 1; k < 3; ++k)
                    s[k] = eval(s[0][0] + 0.5 * (s[k][0] - s[0][0]), s[0][1] + 0.5 * (s[k][1] - s[0][1]));
            }
        }
    }
    return *std::min_element(s.begin(), s.end(), [](const P& a, const P& b) { return a[2] < b[2]; });
}

} // namespace detail

inline constexpr int kDiscordGridTheta = 64;
inline constexpr int kDiscordGridPhi = 64;

// Projective-measurement discord: coarse Bloch-sphere grid, then simplex refinement.
inline DiscordResult quantum_discord(const DensityMatrix& rho, Subsystem measured = Subsystem::a) {
    if (rho.dim() != 4) throw InvalidState("discord needs a two-qubit state");
    const Subsystem other = measured == Subsystem::a ? Subsystem::b : Subsystem::a;
    const double s_other = von_neumann_entropy(partial_trace(rho, other));
    const double info = mutual_information(rho);

    auto objective = [&](double t, double p) { return conditional_entropy(rho, measured, t, p); };

    const double dt = std::numbers::pi / (kDiscordGridTheta - 1);
    const double dp = 2.0 * std::numbers::pi / kDiscordGridPhi;
    double best = std::numeric_limits<double>::infinity(), bt = 0.0, bp = 0.0;
    for (int i = 0; i < kDiscordGridTheta; ++i)
        for (int j = 0; j < kDiscordGridPhi; ++j) {
            const double v = objective(i * dt, j * dp);
            if (v < best) {
                best = v;
                bt = i * dt;
                bp = j * dp;
            }
        }

    const auto refined = detail::nelder_mead_2d(objective, bt, bp, 0.5 * dt, 0.5 * dp, 1e-12, 2000);
    if (refined[2] < best) {
        best = refined[2];
        std::tie(bt, bp) = normalize_angles(refined[0], refined[1]);
    }

    DiscordResult out;
    out.measured = measured;
    out.mutual_information = info;
    out.classical = s_other - best;
    out.discord = info - out.classical;
    if (out.discord < 0.0 && out.discord > -1e-8) out.discord = 0.0;
    if (out.classical < 0.0 && out.classical > -1e-8) out.classical = 0.0;
    out.theta = bt;
    out.phi = bp;
    return out;
}

} // namespace otto
