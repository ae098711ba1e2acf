#pragma once
// Two-time energy measurements, work and bath strokes, and the four-stroke Otto cycle.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otto/correlations.hpp"
#include "otto/lindblad.hpp"
#include "otto/qcore.hpp"
#include "otto/system.hpp"

namespace otto {

enum class Measurement { projective, unmeasured };
enum class StrokeMode { quench, ramped };

inline const char* to_string(Measurement m) { return m == Measurement::projective ? "projective" : "unmeasured"; }
inline const char* to_string(StrokeMode m) { return m == StrokeMode::quench ? "quench" : "ramped"; }

// Eigenspaces of H with nearly equal eigenvalues merged.
struct EnergyEigenspaces {
    std::vector<double> energies;
    std::vector<CMatrix> projectors;
};

inline EnergyEigenspaces energy_eigenspaces(const CMatrix& H) {
    const EigenSystem es = hermitian_eigensystem(H);
    const double tol = 1e-9 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
    EnergyEigenspaces out;
    const Eigen::Index n = es.values.size();
    for (Eigen::Index lo = 0; lo < n;) {
        Eigen::Index hi = lo + 1;
        while (hi < n && es.values(hi) - es.values(hi - 1) < tol) ++hi;
        const CMatrix v = es.vectors.middleCols(lo, hi - lo);
        out.energies.push_back(es.values.segment(lo, hi - lo).mean());
        out.projectors.push_back(v * v.adjoint());
        lo = hi;
    }
    return out;
}

struct EnergyOutcome {
    double energy = 0.0;
    double probability = 0.0;
};

struct ProjectionResult {
    DensityMatrix projected;
    std::vector<EnergyOutcome> outcomes;
};

inline ProjectionResult energy_projection(const DensityMatrix& rho, const EnergyEigenspaces& spaces) {
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    std::vector<EnergyOutcome> outcomes;
    for (std::size_t k = 0; k < spaces.projectors.size(); ++k) {
        const CMatrix& p = spaces.projectors[k];
        out += p * rho.mat() * p;
        outcomes.push_back({spaces.energies[k], std::max(0.0, (p * rho.mat()).trace().real())});
    }
    return {DensityMatrix::normalized(out), std::move(outcomes)};
}

inline ProjectionResult energy_projection(const DensityMatrix& rho, const CMatrix& H) {
    require_hermitian(H);
    return energy_projection(rho, energy_eigenspaces(H));
}

struct WorkValue {
    double work = 0.0;
    double probability = 0.0;
};

struct WorkRecord {
    double mean = 0.0;
    std::vector<WorkValue> distribution;
    Measurement protocol = Measurement::projective;
};

struct WorkStrokeResult {
    DensityMatrix state;
    WorkRecord work;
};

// Time-ordered propagator of the linear path H_in -> H_fin over tau.
// Fixed-step RK4; the step count doubles until the result is stable to 1e-10.
inline CMatrix ramp_unitary(const CMatrix& H_in, const CMatrix& H_fin, double tau) {
    require_hermitian(H_in);
    require_hermitian(H_fin);
    if (!(tau >= 0.0)) throw OutOfRange("ramp duration must be non-negative");
    const Eigen::Index n = H_in.rows();
    if (tau == 0.0) return CMatrix::Identity(n, n);
    const cplx mi(0.0, -1.0);
    const CMatrix dH = H_fin - H_in;
    auto integrate = [&](long steps) {
        const double h = tau / double(steps);
        CMatrix U = CMatrix::Identity(n, n);
        for (long s = 0; s < steps; ++s) {
            const double t = s * h;
            const CMatrix Ha = H_in + dH * (t / tau);
            const CMatrix Hm = H_in + dH * ((t + 0.5 * h) / tau);
            const CMatrix Hb = H_in + dH * ((t + h) / tau);
            const CMatrix k1 = mi * Ha * U;
            const CMatrix k2 = mi * Hm * (U + 0.5 * h * k1);
            const CMatrix k3 = mi * Hm * (U + 0.5 * h * k2);
            const CMatrix k4 = mi * Hb * (U + h * k3);
            U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return U;
    };
    long steps = std::max<long>(16, long(std::ceil(tau * 8.0)));
    CMatrix prev = integrate(steps);
    for (int round = 0; round < 16; ++round) {
        steps *= 2;
        CMatrix next = integrate(steps);
        if (max_abs(next - prev) < 1e-10) return next;
        prev = std::move(next);
    }
    throw NumericalFailure("ramp integration did not reach 1e-10 step stability");
}

namespace detail {

inline double energy(const DensityMatrix& rho, const CMatrix& H) { return expectation(rho.mat(), H); }

inline DensityMatrix evolve(const DensityMatrix& rho, const CMatrix& U) {
    return DensityMatrix::normalized(U * rho.mat() * U.adjoint());
}

inline std::vector<WorkValue> merge_work(std::vector<WorkValue> v, double tol) {
    std::sort(v.begin(), v.end(), [](const WorkValue& a, const WorkValue& b) { return a.work < b.work; });
    std::vector<WorkValue> out;
    for (const auto& w : v) {
        if (!out.empty() && w.work - out.back().work < tol) {
            const double p = out.back().probability + w.probability;
            if (p > 0.0) out.back().work = (out.back().work * out.back().probability + w.work * w.probability) / p;
            out.back().probability = p;
        } else {
            out.push_back(w);
        }
    }
    std::erase_if(out, [](const WorkValue& w) { return w.probability < 1e-14; });
    return out;
}

// Work stroke with precomputed eigenspaces and propagator.
inline WorkStrokeResult work_stroke(const DensityMatrix& rho, const CMatrix& H_in, const CMatrix& H_fin,
                                    const EnergyEigenspaces& in, const EnergyEigenspaces& fin, const CMatrix& U,
                                    Measurement measurement) {
    if (measurement == Measurement::unmeasured) {
        DensityMatrix out = evolve(rho, U);
        const double w = energy(out, H_fin) - energy(rho, H_in);
        return {std::move(out), {w, {}, Measurement::unmeasured}};
    }
    std::vector<WorkValue> dist;
    for (std::size_t i = 0; i < in.projectors.size(); ++i) {
        const CMatrix branch = U * in.projectors[i] * rho.mat() * in.projectors[i] * U.adjoint();
        for (std::size_t j = 0; j < fin.projectors.size(); ++j) {
            const double p = (fin.projectors[j] * branch).trace().real();
            if (p > 0.0) dist.push_back({fin.energies[j] - in.energies[i], p});
        }
    }
    const double scale = std::max({1.0, in.energies.empty() ? 0.0 : std::abs(in.energies.front()),
                                   std::abs(in.energies.back()), std::abs(fin.energies.front()),
                                   std::abs(fin.energies.back())});
    DensityMatrix projected = energy_projection(rho, in).projected;
    DensityMatrix out = evolve(projected, U);
    const double w = energy(out, H_fin) - energy(rho, H_in);
    return {std::move(out), {w, merge_work(std::move(dist), 1e-9 * scale), Measurement::projective}};
}

} // namespace detail

inline WorkStrokeResult work_stroke(const DensityMatrix& rho, const CMatrix& H_in, const CMatrix& H_fin,
                                    StrokeMode mode = StrokeMode::quench, double tau_ramp = 0.0,
                                    Measurement measurement = Measurement::projective) {
    require_hermitian(H_in);
    require_hermitian(H_fin);
    const CMatrix U = mode == StrokeMode::ramped ? ramp_unitary(H_in, H_fin, tau_ramp)
                                                 : CMatrix(CMatrix::Identity(H_in.rows(), H_in.cols()));
    return detail::work_stroke(rho, H_in, H_fin, energy_eigenspaces(H_in), energy_eigenspaces(H_fin), U,
                               measurement);
}

// What to do when full relaxation meets a multi-dimensional Liouvillian kernel.
enum class DegeneratePolicy { raise, asymptotic };

// Relaxation map of one bath stroke at fixed Hamiltonian.
class BathStroke {
public:
    BathStroke(const CMatrix& H, const std::vector<JumpTerm>& terms, std::optional<double> duration,
               DegeneratePolicy policy = DegeneratePolicy::raise)
        : H_(H), L_(liouvillian(H, terms)), policy_(policy) {
        if (duration) {
            propagator_.emplace(L_, *duration);
        } else if (policy == DegeneratePolicy::raise) {
            steady_ = steady_state(L_).state;
        } else {
            try {
                steady_ = steady_state(L_).state;
            } catch (const DegenerateSteadyState&) {
            }
        }
    }

    DensityMatrix relax(const DensityMatrix& rho) const {
        if (propagator_) return propagator_->apply(rho);
        if (steady_) return *steady_;
        return asymptotic_state(L_, rho);
    }

    // (final state, heat absorbed)
    std::pair<DensityMatrix, double> operator()(const DensityMatrix& rho) const {
        DensityMatrix out = relax(rho);
        const double q = detail::energy(out, H_) - detail::energy(rho, H_);
        return {std::move(out), q};
    }

    const SuperOperator& liouvillian_op() const noexcept { return L_; }
    const std::optional<DensityMatrix>& steady() const noexcept { return steady_; }

private:
    CMatrix H_;
    SuperOperator L_;
    DegeneratePolicy policy_;
    std::optional<Propagator> propagator_;
    std::optional<DensityMatrix> steady_;
};

struct BathStrokeResult {
    DensityMatrix state;
    double heat = 0.0;
};

// Bath temperatures, if any, are resolved against field_for_temperatures.
inline BathStrokeResult bath_stroke(const DensityMatrix& rho, const CMatrix& H, const BathSpec& bath,
                                    std::optional<double> duration = std::nullopt,
                                    DegeneratePolicy policy = DegeneratePolicy::raise,
                                    double field_for_temperatures = 0.0) {
    const BathSpec resolved = bath.uses_temperature() ? resolve_temperatures(bath, field_for_temperatures) : bath;
    auto [state, q] = BathStroke(H, build_bath(resolved), duration, policy)(rho);
    return {std::move(state), q};
}

// ---------------------------------------------------------------------------
// Otto cycle

struct CycleSpec {
    HamiltonianParams hamiltonian;
    RampSpec ramp;
    BathSpec hot_bath;
    BathSpec cold_bath;
    std::optional<double> stroke_time;
    Measurement measurement = Measurement::projective;
    StrokeMode stroke_mode = StrokeMode::quench;
    Subsystem measured_subsystem = Subsystem::a;
    bool correlations = true;
    int max_iterations = 10000;
    double tolerance = 1e-10;

    bool operator==(const CycleSpec&) const = default;
};

struct CornerCorrelations {
    double concurrence_pre = 0.0;
    double concurrence_post = 0.0;
    DiscordResult discord_pre;
    DiscordResult discord_post;
};

struct CycleCorner {
    std::string label;
    DensityMatrix state;
    double energy = 0.0;
};

struct CycleReport {
    double W1 = 0.0, Q1 = 0.0, W2 = 0.0, Q2 = 0.0, W_T = 0.0;
    std::optional<double> eta;
    int iterations = 0;
    double residual = 0.0; // trace distance between the last two cycle starts
    WorkRecord compression;
    WorkRecord expansion;
    std::vector<CycleCorner> corners; // post-compression, post-heating, post-expansion, post-cooling
    std::optional<CornerCorrelations> hot;
    std::optional<CornerCorrelations> cold;
    Subsystem measured_subsystem = Subsystem::a;
    bool degenerate_start = false;

    double first_law_residual() const { return W1 + W2 + Q1 + Q2; }
};

inline HamiltonianParams stroke_params(const CycleSpec& spec, bool hot) {
    return with_parameter(spec.hamiltonian, spec.ramp.parameter, hot ? spec.ramp.P2 : spec.ramp.P1);
}

inline CornerCorrelations corner_correlations(const DensityMatrix& rho, const EnergyEigenspaces& spaces,
                                              Subsystem measured) {
    const DensityMatrix post = energy_projection(rho, spaces).projected;
    return {concurrence(rho), concurrence(post), quantum_discord(rho, measured), quantum_discord(post, measured)};
}

// Efficiency W_T / (sum of absorbed heats), defined only for W_T > 0.
// W_T within the round-off floor of the heats counts as no work.
inline std::optional<double> efficiency(double W_T, std::initializer_list<double> heats) {
    double in = 0.0, scale = 1.0;
    for (double q : heats) {
        if (q > 0.0) in += q;
        scale = std::max(scale, std::abs(q));
    }
    if (!(W_T > 1e-12 * scale) || !(in > 0.0)) return std::nullopt;
    return W_T / in;
}

// Compression at P1 -> P2, heating at P2, expansion P2 -> P1, cooling at P1,
// repeated until the cycle start state stops changing.
inline CycleReport run_cycle(const CycleSpec& spec) {
    if (!(spec.ramp.P2 > spec.ramp.P1)) throw InvalidSpec("compression requires P2 > P1");
    if (spec.stroke_time && !(*spec.stroke_time > 0.0)) throw InvalidSpec("stroke_time must be positive");
    if (spec.max_iterations < 1) throw InvalidSpec("max_iterations must be positive");

    const HamiltonianParams p1 = stroke_params(spec, false);
    const HamiltonianParams p2 = stroke_params(spec, true);
    const CMatrix H1 = build_hamiltonian(p1);
    const CMatrix H2 = build_hamiltonian(p2);
    const EnergyEigenspaces E1 = energy_eigenspaces(H1);
    const EnergyEigenspaces E2 = energy_eigenspaces(H2);

    const BathSpec hot = spec.hot_bath.uses_temperature() ? resolve_temperatures(spec.hot_bath, p2.B) : spec.hot_bath;
    const BathSpec cold =
        spec.cold_bath.uses_temperature() ? resolve_temperatures(spec.cold_bath, p1.B) : spec.cold_bath;
    const BathStroke heating(H2, build_bath(hot), spec.stroke_time, DegeneratePolicy::asymptotic);
    const BathStroke cooling(H1, build_bath(cold), spec.stroke_time, DegeneratePolicy::asymptotic);

    CMatrix Uc = CMatrix::Identity(4, 4), Ue = CMatrix::Identity(4, 4);
    if (spec.stroke_mode == StrokeMode::ramped) {
        Uc = ramp_unitary(H1, H2, spec.ramp.tau_ramp);
        Ue = ramp_unitary(H2, H1, spec.ramp.tau_ramp);
    }

    CycleReport rep;
    rep.measured_subsystem = spec.measured_subsystem;
    DensityMatrix start = DensityMatrix::maximally_mixed(4);
    try {
        start = steady_state(cooling.liouvillian_op()).state;
    } catch (const DegenerateSteadyState&) {
        rep.degenerate_start = true;
    }

    for (int it = 1; it <= spec.max_iterations; ++it) {
        auto c = detail::work_stroke(start, H1, H2, E1, E2, Uc, spec.measurement);
        auto [s2, q1] = heating(c.state);
        auto e = detail::work_stroke(s2, H2, H1, E2, E1, Ue, spec.measurement);
        auto [s4, q2] = cooling(e.state);
        const double dist = trace_distance(s4, start);
        if (dist < spec.tolerance || it == spec.max_iterations) {
            if (!(dist < spec.tolerance))
                throw NoConvergence("limit cycle not reached after " + std::to_string(it) +
                                    " iterations (trace distance " + std::to_string(dist) + ")");
            rep.W1 = c.work.mean;
            rep.Q1 = q1;
            rep.W2 = e.work.mean;
            rep.Q2 = q2;
            rep.W_T = -(rep.W1 + rep.W2);
            rep.eta = efficiency(rep.W_T, {rep.Q1, rep.Q2});
            rep.iterations = it;
            rep.residual = dist;
            rep.compression = std::move(c.work);
            rep.expansion = std::move(e.work);
            rep.corners = {{"post_compression", c.state, detail::energy(c.state, H2)},
                           {"post_heating", s2, detail::energy(s2, H2)},
                           {"post_expansion", e.state, detail::energy(e.state, H1)},
                           {"post_cooling", s4, detail::energy(s4, H1)}};
            if (spec.correlations) {
                rep.hot = corner_correlations(s2, E2, spec.measured_subsystem);
                rep.cold = corner_correlations(s4, E1, spec.measured_subsystem);
            }
            return rep;
        }
        start = std::move(s4);
    }
    throw NoConvergence("limit cycle not reached");
}

} // namespace otto
