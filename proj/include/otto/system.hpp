#pragma once
// Hamiltonians, parameter ramps and the catalog of dissipative environments.

#include <cmath>
#include <string>
#include <vector>

#include "otto/qcore.hpp"

namespace otto {

enum class FieldAxis { z, x };

// H = Jx sx_a sx_b + Jy sy_a sy_b + B (s_a + s_b), s = sigma_z or sigma_x by axis.
struct HamiltonianParams {
    double Jx = 0.0;
    double Jy = 0.0;
    double B = 0.0;
    FieldAxis field_axis = FieldAxis::z;

    static HamiltonianParams xx(double J, double B) { return {J, J, B, FieldAxis::z}; }
    static HamiltonianParams ising(double J) { return {J, 0.0, 0.0, FieldAxis::z}; }
    static HamiltonianParams x_field(double B) { return {0.0, 0.0, B, FieldAxis::x}; }

    bool operator==(const HamiltonianParams&) const = default;
};

inline CMatrix build_hamiltonian(const HamiltonianParams& p) {
    const CMatrix field = p.field_axis == FieldAxis::z ? CMatrix(on_a(pauli::z()) + on_b(pauli::z()))
                                                       : CMatrix(on_a(pauli::x()) + on_b(pauli::x()));
    CMatrix h = p.Jx * kron(pauli::x(), pauli::x()) + p.Jy * kron(pauli::y(), pauli::y()) + p.B * field;
    return hermitize(h);
}

// ---------------------------------------------------------------------------
// Ramps

enum class RampParameter { B, J, Jx, Jy };

struct RampSpec {
    double P1 = 0.0;
    double P2 = 0.0;
    double tau_ramp = 0.0;
    RampParameter parameter = RampParameter::B;

    bool operator==(const RampSpec&) const = default;
};

// Linear ramp; tau_ramp == 0 is a quench and always yields P2.
inline double ramp_value(const RampSpec& spec, double t) {
    if (spec.tau_ramp < 0.0) throw OutOfRange("ramp duration must be non-negative");
    if (t < 0.0 || t > spec.tau_ramp) throw OutOfRange("ramp time " + std::to_string(t) + " outside [0, tau_ramp]");
    if (spec.tau_ramp == 0.0) return spec.P2;
    return spec.P1 + (spec.P2 - spec.P1) * t / spec.tau_ramp;
}

// Sets the ramped parameter. "J" moves Jx and keeps the preset's Jy/Jx ratio,
// so XX stays XX and Ising keeps Jy = 0.
inline HamiltonianParams with_parameter(HamiltonianParams p, RampParameter which, double value) {
    switch (which) {
    case RampParameter::B: p.B = value; break;
    case RampParameter::Jx: p.Jx = value; break;
    case RampParameter::Jy: p.Jy = value; break;
    case RampParameter::J:
        if (p.Jx != 0.0) p.Jy = value * (p.Jy / p.Jx);
        p.Jx = value;
        break;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Baths

struct JumpTerm {
    CMatrix op;
    double rate = 0.0;
    std::string label;
};

enum class BathKind { local_thermal, common_coherence, common_dephasing, bell_pump, composite };

inline const char* to_string(BathKind k) {
    switch (k) {
    case BathKind::local_thermal: return "local_thermal";
    case BathKind::common_coherence: return "common_coherence";
    case BathKind::common_dephasing: return "common_dephasing";
    case BathKind::bell_pump: return "bell_pump";
    case BathKind::composite: return "composite";
    }
    return "?";
}

// Declarative environment. Leaves:
//   local_thermal     sigma_+^j at gamma_j n_j, sigma_-^j at gamma_j (n_j + 1)
//   common_coherence  a5, a6 at gamma
//   common_dephasing  sz_a + sz_b, sz_a - sz_b at (1 - gamma)
//   bell_pump         a3, a4 at gamma
// A composite pushes its gamma into every part and scales local_thermal parts
// by (1 - gamma). rate_scale multiplies every rate of the node.
//
// Occupations may instead come from temperatures (temperature_a/b > 0); those
// are resolved against the stroke's field with resolve_temperatures().
struct BathSpec {
    BathKind kind = BathKind::local_thermal;
    double gamma_a = 1.0;
    double gamma_b = 1.0;
    double nbar_a = 0.0;
    double nbar_b = 0.0;
    double temperature_a = 0.0;
    double temperature_b = 0.0;
    double gamma = 1.0;
    double rate_scale = 1.0;
    std::vector<BathSpec> parts;

    static BathSpec local_thermal(double gamma_a, double gamma_b, double nbar_a, double nbar_b) {
        BathSpec s;
        s.kind = BathKind::local_thermal;
        s.gamma_a = gamma_a;
        s.gamma_b = gamma_b;
        s.nbar_a = nbar_a;
        s.nbar_b = nbar_b;
        return s;
    }
    static BathSpec local_thermal(double gamma, double nbar) { return local_thermal(gamma, gamma, nbar, nbar); }
    static BathSpec leaf(BathKind kind, double gamma) {
        BathSpec s;
        s.kind = kind;
        s.gamma = gamma;
        return s;
    }
    static BathSpec common_coherence(double gamma) { return leaf(BathKind::common_coherence, gamma); }
    static BathSpec common_dephasing(double gamma) { return leaf(BathKind::common_dephasing, gamma); }
    static BathSpec bell_pump(double gamma) { return leaf(BathKind::bell_pump, gamma); }
    static BathSpec composite(double gamma, std::vector<BathSpec> parts) {
        BathSpec s;
        s.kind = BathKind::composite;
        s.gamma = gamma;
        s.parts = std::move(parts);
        return s;
    }

    bool uses_temperature() const {
        if (kind == BathKind::composite) {
            for (const auto& p : parts)
                if (p.uses_temperature()) return true;
            return false;
        }
        return kind == BathKind::local_thermal && (temperature_a > 0.0 || temperature_b > 0.0);
    }

    bool operator==(const BathSpec&) const = default;
};

// Thermal occupation of a qubit with splitting 2B at temperature T.
inline double thermal_occupation(double field, double temperature) {
    if (!(temperature > 0.0)) throw InvalidSpec("temperature must be positive");
    const double x = 2.0 * field / temperature;
    if (!(x > 0.0)) throw InvalidSpec("thermal occupation needs a positive field");
    return 1.0 / std::expm1(x);
}

inline BathSpec resolve_temperatures(BathSpec spec, double field) {
    if (spec.kind == BathKind::local_thermal) {
        if (spec.temperature_a > 0.0) spec.nbar_a = thermal_occupation(field, spec.temperature_a);
        if (spec.temperature_b > 0.0) spec.nbar_b = thermal_occupation(field, spec.temperature_b);
        spec.temperature_a = spec.temperature_b = 0.0;
    }
    for (auto& p : spec.parts) p = resolve_temperatures(p, field);
    return spec;
}

namespace bath_ops {

inline CMatrix a5() {
    using namespace pauli;
    return (on_a(minus()) - on_b(z())) * (on_a(minus()) - on_b(minus()));
}
inline CMatrix a6() {
    using namespace pauli;
    return (on_a(z()) - on_b(x())) * (on_a(x()) - on_b(minus()));
}
inline CMatrix dephasing_sum() { return on_a(pauli::z()) + on_b(pauli::z()); }
inline CMatrix dephasing_difference() { return on_a(pauli::z()) - on_b(pauli::z()); }
inline CMatrix bell_a3() {
    const CMatrix id = CMatrix::Identity(4, 4);
    return 0.5 * on_b(pauli::x()) * (id + kron(pauli::z(), pauli::z()));
}
inline CMatrix bell_a4() {
    const CMatrix id = CMatrix::Identity(4, 4);
    return 0.5 * on_b(pauli::z()) * (id + kron(pauli::x(), pauli::x()));
}

} // namespace bath_ops

namespace detail {

inline void check_rate(double r, const char* what) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidSpec(std::string(what) + " must be a finite non-negative rate");
}

inline void check_gamma(double g) {
    if (!(g >= 0.0 && g <= 1.0)) throw InvalidSpec("mixing weight gamma must satisfy 0 <= gamma <= 1");
}

inline void push(std::vector<JumpTerm>& out, CMatrix op, double rate, const char* label) {
    if (rate > 0.0) out.push_back({std::move(op), rate, label});
}

inline void build_into(const BathSpec& s, double scale, double local_weight, std::vector<JumpTerm>& out) {
    check_rate(s.rate_scale, "rate_scale");
    scale *= s.rate_scale;
    switch (s.kind) {
    case BathKind::local_thermal: {
        if (s.temperature_a > 0.0 || s.temperature_b > 0.0)
            throw InvalidSpec("local_thermal temperatures must be resolved against a field before building");
        check_rate(s.gamma_a, "gamma_a");
        check_rate(s.gamma_b, "gamma_b");
        check_rate(s.nbar_a, "nbar_a");
        check_rate(s.nbar_b, "nbar_b");
        const double w = scale * local_weight;
        push(out, on_a(pauli::plus()), w * s.gamma_a * s.nbar_a, "sigma+_a");
        push(out, on_a(pauli::minus()), w * s.gamma_a * (s.nbar_a + 1.0), "sigma-_a");
        push(out, on_b(pauli::plus()), w * s.gamma_b * s.nbar_b, "sigma+_b");
        push(out, on_b(pauli::minus()), w * s.gamma_b * (s.nbar_b + 1.0), "sigma-_b");
        break;
    }
    case BathKind::common_coherence:
        check_gamma(s.gamma);
        push(out, bath_ops::a5(), scale * s.gamma, "a5");
        push(out, bath_ops::a6(), scale * s.gamma, "a6");
        break;
    case BathKind::common_dephasing:
        check_gamma(s.gamma);
        push(out, bath_ops::dephasing_sum(), scale * (1.0 - s.gamma), "sz_a+sz_b");
        push(out, bath_ops::dephasing_difference(), scale * (1.0 - s.gamma), "sz_a-sz_b");
        break;
    case BathKind::bell_pump:
        check_gamma(s.gamma);
        push(out, bath_ops::bell_a3(), scale * s.gamma, "a3");
        push(out, bath_ops::bell_a4(), scale * s.gamma, "a4");
        break;
    case BathKind::composite:
        check_gamma(s.gamma);
        for (BathSpec part : s.parts) {
            if (part.kind == BathKind::composite) throw InvalidSpec("nested composite baths are not supported");
            part.gamma = s.gamma;
            build_into(part, scale, local_weight * (part.kind == BathKind::local_thermal ? 1.0 - s.gamma : 1.0), out);
        }
        break;
    }
}

} // namespace detail

// Flat list of jump operators with strictly positive rates.
inline std::vector<JumpTerm> build_bath(const BathSpec& spec) {
    std::vector<JumpTerm> out;
    detail::build_into(spec, 1.0, 1.0, out);
    return out;
}

} // namespace otto
