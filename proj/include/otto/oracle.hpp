#pragma once
// Closed-form engine results used as ground truth for the simulator.

#include <cmath>
#include <optional>

#include "otto/qcore.hpp"
#include "otto/system.hpp"

namespace otto::oracle {

struct ClosedFormCycle {
    double W1 = 0.0, Q1 = 0.0, W2 = 0.0, Q2 = 0.0, W_T = 0.0;
    std::optional<double> eta;

    double first_law_residual() const { return W1 + W2 + Q1 + Q2; }
};

namespace detail {

inline std::optional<double> eta_from(double W_T, double Q1, double Q2) {
    if (!(W_T > 0.0)) return std::nullopt;
    const double in = (Q1 > 0.0 ? Q1 : 0.0) + (Q2 > 0.0 ? Q2 : 0.0);
    if (!(in > 0.0)) return std::nullopt;
    return W_T / in;
}

inline void require(bool ok, const char* what) {
    if (!ok) throw OutOfRange(what);
}

} // namespace detail

// ---------------------------------------------------------------------------
// XX model, local baths, equal temperatures

inline ClosedFormCycle xx_equal_temp_cycle(double B1, double B2, double nC, double nH) {
    detail::require(nC >= 0.0 && nH >= 0.0, "occupations must be non-negative");
    const double zc = 1.0 + 2.0 * nC, zh = 1.0 + 2.0 * nH;
    ClosedFormCycle c;
    c.W1 = 2.0 * (B1 - B2) / zc;
    c.Q1 = 2.0 * B2 * (1.0 / zc - 1.0 / zh);
    c.W2 = -2.0 * (B1 - B2) / zh;
    c.Q2 = 2.0 * B1 * (1.0 / zh - 1.0 / zc);
    c.W_T = 4.0 * (B1 - B2) * (nC - nH) / (zc * zh);
    c.eta = detail::eta_from(c.W_T, c.Q1, c.Q2);
    return c;
}

// Total work as the hot occupation grows without bound.
inline double xx_equal_temp_hot_limit(double B1, double B2, double nC) {
    detail::require(nC >= 0.0, "occupation must be non-negative");
    return 2.0 * (B2 - B1) / (1.0 + 2.0 * nC);
}

// ---------------------------------------------------------------------------
// XX model, local baths, unequal temperatures and rates

struct UnequalCoefficients {
    double alpha = 1.0, r11 = 0.0, r22 = 0.0, r33 = 0.0, r44 = 0.0, r23 = 0.0;
};

inline UnequalCoefficients xx_unequal_coefficients(double J, double ga, double gb, double na, double nb) {
    detail::require(ga > 0.0 && gb > 0.0, "rates must be positive");
    detail::require(na >= 0.0 && nb >= 0.0, "occupations must be non-negative");
    const double J2 = J * J;
    const double S = ga + gb + 2.0 * ga * na + 2.0 * gb * nb;
    UnequalCoefficients c;
    c.alpha = S * S * (ga * gb + 4.0 * J2 + 2.0 * ga * gb * (nb + na * (2.0 * nb + 1.0)));
    c.r11 = 4.0 * ga * ga * na * na * (J2 + gb * nb * (ga + gb + 2.0 * gb * nb)) +
            ga * gb * nb * na * ((ga + gb) * (ga + gb) + 8.0 * J2 + 4.0 * gb * nb * (ga + gb + gb * nb)) +
            4.0 * gb * gb * J2 * nb * nb + 4.0 * ga * ga * ga * gb * nb * na * na * na;
    c.r22 = 4.0 * ga * ga * na * na * (gb * (ga + gb) + J2 + gb * nb * (ga + 3.0 * gb + 2.0 * gb * nb)) +
            ga * na * (ga + gb + 2.0 * gb * nb) * (gb * (ga + gb) + 4.0 * J2 + gb * nb * (ga + 3.0 * gb + 2.0 * gb * nb)) +
            4.0 * gb * J2 * nb * (ga + gb + gb * nb) + 4.0 * ga * ga * ga * gb * (nb + 1.0) * na * na * na;
    c.r33 = 4.0 * gb * gb * nb * nb * (ga * (ga + gb) + J2 + ga * na * (3.0 * ga + gb + 2.0 * ga * na)) +
            gb * nb * (ga + gb + 2.0 * ga * na) * (ga * (ga + gb) + 4.0 * J2 + ga * na * (3.0 * ga + gb + 2.0 * ga * na)) +
            4.0 * ga * J2 * na * (ga + gb + ga * na) + 4.0 * ga * gb * gb * gb * (na + 1.0) * nb * nb * nb;
    c.r44 = (ga + gb) * (ga + gb) * (ga * gb + 4.0 * J2) +
            ga * na *
                ((ga + gb) * (gb * (5.0 * ga + gb) + 8.0 * J2) +
                 gb * nb *
                     (5.0 * ga * ga + 18.0 * ga * gb + 5.0 * gb * gb + 8.0 * J2 +
                      4.0 * gb * nb * (3.0 * ga + 2.0 * gb + gb * nb))) +
            4.0 * ga * ga * na * na * (gb * (2.0 * ga + gb) + J2 + gb * nb * (2.0 * ga + 3.0 * gb + 2.0 * gb * nb)) +
            gb * nb *
                ((ga + gb) * (ga * (ga + 5.0 * gb) + 8.0 * J2) +
                 4.0 * gb * nb * (ga * ga + 2.0 * ga * gb + J2 + ga * gb * nb)) +
            4.0 * ga * ga * ga * gb * (nb + 1.0) * na * na * na;
    c.r23 = 2.0 * ga * gb * J * (na - nb) * S;
    return c;
}

// Zero-occupation form for qubit b, kept separate as a transcription cross-check.
inline UnequalCoefficients xx_unequal_coefficients_zero_nb(double J, double ga, double gb, double na) {
    detail::require(ga > 0.0 && gb > 0.0, "rates must be positive");
    detail::require(na >= 0.0, "occupation must be non-negative");
    const double J2 = J * J, m = 1.0 + 2.0 * na;
    const double S = m * ga + gb;
    UnequalCoefficients c;
    c.alpha = S * S * (4.0 * J2 + m * ga * gb);
    c.r11 = 4.0 * J2 * na * na * ga * ga;
    c.r22 = na * ga *
            (4.0 * J2 * (1.0 + na) * ga + (4.0 * J2 + m * m * ga * ga) * gb + 2.0 * m * ga * gb * gb + gb * gb * gb);
    c.r33 = 4.0 * J2 * na * ga * ((1.0 + na) * ga + gb);
    c.r44 = 4.0 * J2 * (1.0 + na) * (1.0 + na) * ga * ga + (1.0 + na) * ga * (8.0 * J2 + m * m * ga * ga) * gb +
            2.0 * gb * gb * (2.0 * J2 + (1.0 + na) * m * ga * ga) + (1.0 + na) * ga * gb * gb * gb;
    c.r23 = 2.0 * J * na * ga * gb * S;
    return c;
}

inline DensityMatrix unequal_state(const UnequalCoefficients& c) {
    const cplx i(0.0, 1.0);
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = c.r11;
    m(1, 1) = c.r22;
    m(2, 2) = c.r33;
    m(3, 3) = c.r44;
    m(1, 2) = i * c.r23;
    m(2, 1) = -i * c.r23;
    return DensityMatrix(m / c.alpha);
}

inline DensityMatrix xx_unequal_steady_state(double J, double ga, double gb, double na, double nb) {
    return unequal_state(xx_unequal_coefficients(J, ga, gb, na, nb));
}

inline DensityMatrix xx_unequal_steady_state_zero_nb(double J, double ga, double gb, double na) {
    return unequal_state(xx_unequal_coefficients_zero_nb(J, ga, gb, na));
}

// Energy of the steady state is 2B (r11 - r44) / alpha; the coherence does not contribute.
inline ClosedFormCycle xx_unequal_cycle(double B1, double B2, double J, double ga, double gb, double nCa, double nCb,
                                        double nHa, double nHb) {
    const auto c = xx_unequal_coefficients(J, ga, gb, nCa, nCb);
    const auto h = xx_unequal_coefficients(J, ga, gb, nHa, nHb);
    const double mc = (c.r11 - c.r44) / c.alpha;
    const double mh = (h.r11 - h.r44) / h.alpha;
    ClosedFormCycle out;
    out.W1 = 2.0 * (B2 - B1) * mc;
    out.Q1 = 2.0 * B2 * (mh - mc);
    out.W2 = 2.0 * (B1 - B2) * mh;
    out.Q2 = 2.0 * B1 * (mc - mh);
    out.W_T = 2.0 * (B2 - B1) * (mh - mc);
    out.eta = detail::eta_from(out.W_T, out.Q1, out.Q2);
    return out;
}

// ---------------------------------------------------------------------------
// Thermal (Gibbs) working states

inline DensityMatrix gibbs_state(const CMatrix& H, double T) {
    detail::require(T > 0.0, "temperature must be positive");
    const double e0 = hermitian_eigenvalues(H).minCoeff();
    return DensityMatrix::normalized(hermitian_function(H, [&](double e) { return std::exp(-(e - e0) / T); }));
}

struct ThermalCycle {
    ClosedFormCycle cycle;
    double Theta1 = 0.0, Theta2 = 0.0; // as defined for the printed heat expressions
    double Phi1 = 0.0, Phi2 = 0.0;
    double Psi1 = 0.0, Psi2 = 0.0; // coupling energy weights: <H> = -2B Phi - 2J Psi
    double Z1 = 0.0, Z2 = 0.0;
    DensityMatrix cold_state = DensityMatrix::maximally_mixed(4);
    DensityMatrix hot_state = DensityMatrix::maximally_mixed(4);
    double steady_W_T = 0.0; // local-bath steady-state work at the same temperatures
};

// Local-bath steady-state work with occupations n = 1/(exp(2B/T) - 1).
inline double steady_state_work_from_temperatures(double B1, double B2, double T1, double T2) {
    detail::require(T1 > 0.0 && T2 > 0.0, "temperatures must be positive");
    return 2.0 * (B1 - B2) * (std::tanh(B2 / T2) - std::tanh(B1 / T1));
}

inline ThermalCycle thermal_cycle(double B1, double B2, double J, double T1, double T2) {
    detail::require(T1 > 0.0 && T2 > 0.0, "temperatures must be positive");
    auto weights = [&](double B, double T, double& theta, double& phi, double& psi, double& z) {
        const double den = std::cosh(2.0 * B / T) + std::cosh(2.0 * J / T);
        phi = std::sinh(2.0 * B / T) / den;
        psi = std::sinh(2.0 * J / T) / den;
        theta = (std::sinh(2.0 * B / T) + J * std::sinh(2.0 * J / T)) / den;
        z = 2.0 * den;
    };
    ThermalCycle t;
    weights(B1, T1, t.Theta1, t.Phi1, t.Psi1, t.Z1);
    weights(B2, T2, t.Theta2, t.Phi2, t.Psi2, t.Z2);
    t.cycle.W1 = 2.0 * (B1 - B2) * t.Phi1;
    t.cycle.W2 = 2.0 * (B2 - B1) * t.Phi2;
    t.cycle.Q1 = 2.0 * B2 * (t.Phi1 - t.Phi2) + 2.0 * J * (t.Psi1 - t.Psi2);
    t.cycle.Q2 = 2.0 * B1 * (t.Phi2 - t.Phi1) + 2.0 * J * (t.Psi2 - t.Psi1);
    t.cycle.W_T = 2.0 * (B1 - B2) * (t.Phi2 - t.Phi1);
    t.cycle.eta = detail::eta_from(t.cycle.W_T, t.cycle.Q1, t.cycle.Q2);
    t.cold_state = gibbs_state(build_hamiltonian(HamiltonianParams::xx(J, B1)), T1);
    t.hot_state = gibbs_state(build_hamiltonian(HamiltonianParams::xx(J, B2)), T2);
    t.steady_W_T = steady_state_work_from_temperatures(B1, B2, T1, T2);
    return t;
}

// ---------------------------------------------------------------------------
// Ising engine with common dephasing (hot) and Bell pumping (cold)

inline double bell_pump_mu(double gamma) {
    detail::require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
    return gamma / (14.0 * gamma - 16.0);
}

inline DensityMatrix bell_pump_state(double mu) {
    CMatrix m = CMatrix::Zero(4, 4);
    m(1, 1) = m(2, 2) = 0.5;
    m(1, 2) = m(2, 1) = mu;
    return DensityMatrix(m);
}

struct BellPumpEngine {
    double mu = 0.0;
    DensityMatrix steady = DensityMatrix::maximally_mixed(4);
    double W_T_printed = 0.0; // mu (J1 - J2)
    double W_T = 0.0;         // energy balance with <H> = 2 mu J
    std::optional<double> eta;
    double C = 0.0;
};

inline BellPumpEngine bell_pump_engine(double J1, double J2, double gamma) {
    BellPumpEngine e;
    e.mu = bell_pump_mu(gamma);
    e.steady = bell_pump_state(e.mu);
    e.W_T_printed = e.mu * (J1 - J2);
    e.W_T = 2.0 * e.mu * (J1 - J2);
    const double Q1 = -2.0 * e.mu * J2;
    const double Q2 = 2.0 * e.mu * J1;
    e.eta = detail::eta_from(e.W_T, Q1, Q2);
    e.C = -2.0 * e.mu;
    return e;
}

// ---------------------------------------------------------------------------
// Finite-time strokes, XX model with equal local baths

struct FiniteTimeCycle {
    ClosedFormCycle cycle;
    double Gamma = 1.0;
    std::optional<double> power; // W_T / (2 tau), undefined at tau = 0
};

inline double finite_time_gamma(double nC, double nH, double gamma, double tau) {
    detail::require(tau >= 0.0 && gamma > 0.0, "need tau >= 0 and gamma > 0");
    return -1.0 + std::exp(-2.0 * gamma * (2.0 * nC + 1.0) * tau) + std::exp(-2.0 * gamma * (2.0 * nH + 1.0) * tau);
}

// Expressions as printed for the finite-time engine.
inline FiniteTimeCycle finite_time_cycle(double B1, double B2, double nC, double nH, double gamma, double tau) {
    FiniteTimeCycle f;
    f.Gamma = finite_time_gamma(nC, nH, gamma, tau);
    const double zc = 2.0 * nC + 1.0, zh = 2.0 * nH + 1.0;
    const double eC = std::exp(-2.0 * gamma * zc * tau), eH = std::exp(-2.0 * gamma * zh * tau);
    f.cycle.W1 = 2.0 * (B1 - B2) / zc * (2.0 * (nC - nH) * eC / zh + 1.0);
    f.cycle.Q1 = 4.0 * B2 * (nC - nH) * f.Gamma / (zc * zh);
    f.cycle.W2 = 2.0 * (B1 - B2) / zc * (2.0 * (nC - nH) * eH / zc - 1.0);
    f.cycle.Q2 = 4.0 * B1 * (nH - nC) * f.Gamma / (zc * zh);
    f.cycle.W_T = 4.0 * (B1 - B2) * (nH - nC) * f.Gamma / (zc * zh);
    f.cycle.eta = detail::eta_from(f.cycle.W_T, f.cycle.Q1, f.cycle.Q2);
    if (tau > 0.0) f.power = f.cycle.W_T / (2.0 * tau);
    return f;
}

// Exact limit cycle of the same engine. Only the total magnetization
// m = <sz_a + sz_b> matters; it relaxes towards -2/(2n+1) at rate 2 gamma (2n+1).
inline FiniteTimeCycle finite_time_limit_cycle(double B1, double B2, double nC, double nH, double gamma, double tau) {
    detail::require(tau >= 0.0 && gamma > 0.0, "need tau >= 0 and gamma > 0");
    FiniteTimeCycle f;
    f.Gamma = 0.0;
    if (tau == 0.0) return f;
    const double zc = 2.0 * nC + 1.0, zh = 2.0 * nH + 1.0;
    const double eC = std::exp(-2.0 * gamma * zc * tau), eH = std::exp(-2.0 * gamma * zh * tau);
    const double mc_eq = -2.0 / zc, mh_eq = -2.0 / zh;
    const double mc = (mc_eq * (1.0 - eC) + mh_eq * (1.0 - eH) * eC) / (1.0 - eC * eH);
    const double mh = mh_eq * (1.0 - eH) + mc * eH;
    f.Gamma = -(1.0 - eC) * (1.0 - eH) / (1.0 - eC * eH);
    f.cycle.W1 = (B2 - B1) * mc;
    f.cycle.Q1 = B2 * (mh - mc);
    f.cycle.W2 = (B1 - B2) * mh;
    f.cycle.Q2 = B1 * (mc - mh);
    f.cycle.W_T = (B2 - B1) * (mh - mc);
    f.cycle.eta = detail::eta_from(f.cycle.W_T, f.cycle.Q1, f.cycle.Q2);
    f.power = f.cycle.W_T / (2.0 * tau);
    return f;
}

// Root of the printed Gamma(tau) by bisection.
inline double finite_time_sign_change(double nC, double nH, double gamma) {
    double lo = 0.0, hi = 1.0;
    while (finite_time_gamma(nC, nH, gamma, hi) > 0.0) hi *= 2.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        (finite_time_gamma(nC, nH, gamma, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace otto::oracle
