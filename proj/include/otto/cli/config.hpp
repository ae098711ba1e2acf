#pragma once
// JSON run configuration: strict schema, physical validation, canonical serialization.

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "otto/thermo.hpp"

namespace otto::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Missing, unknown or mistyped field; field() is the dotted path.
class SchemaError : public ConfigError {
public:
    SchemaError(std::string field, const std::string& what)
        : ConfigError(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Physical invariant violated; rule() names it.
class ValidationError : public ConfigError {
public:
    ValidationError(std::string field, std::string rule)
        : ConfigError(field + ": violates " + rule), field_(std::move(field)), rule_(std::move(rule)) {}
    const std::string& field() const noexcept { return field_; }
    const std::string& rule() const noexcept { return rule_; }

private:
    std::string field_;
    std::string rule_;
};

enum class Command { steady_state, cycle, sweep, finite_time, discord_map };
enum class Preset { xx, ising_x, x_field, custom };
enum class Format { csv, json };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::steady_state: return "steady-state";
    case Command::cycle: return "cycle";
    case Command::sweep: return "sweep";
    case Command::finite_time: return "finite-time";
    case Command::discord_map: return "discord-map";
    }
    return "?";
}

inline const char* to_string(Preset p) {
    switch (p) {
    case Preset::xx: return "xx";
    case Preset::ising_x: return "ising_x";
    case Preset::x_field: return "x_field";
    case Preset::custom: return "custom";
    }
    return "?";
}

inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline bool needs_cycle(Command c) { return c == Command::cycle || c == Command::sweep || c == Command::finite_time; }

struct CycleBlock {
    RampSpec ramp;
    std::optional<double> stroke_time;
    Measurement measurement = Measurement::projective;
    StrokeMode stroke_mode = StrokeMode::quench;
    Subsystem measured_subsystem = Subsystem::a;

    bool operator==(const CycleBlock&) const = default;
};

struct SweepAxis {
    std::vector<std::string> variables; // dotted paths, all set to the same value
    double from = 0.0;
    double to = 0.0;
    int points = 2;

    // Ascending regardless of the from/to order.
    std::vector<double> values() const {
        const double lo = std::min(from, to), hi = std::max(from, to);
        std::vector<double> v(points);
        for (int k = 0; k < points; ++k) v[k] = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
        return v;
    }
    const std::string& name() const { return variables.front(); }

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    SweepAxis outer;
    std::optional<SweepAxis> inner;

    bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
    std::optional<std::string> path;
    Format format = Format::csv;

    bool operator==(const OutputSpec&) const = default;
};

struct RunSpec {
    Command command = Command::cycle;
    Preset preset = Preset::xx;
    HamiltonianParams hamiltonian;
    std::optional<CycleBlock> cycle;
    std::optional<BathSpec> hot_bath;
    std::optional<BathSpec> cold_bath;
    std::optional<SweepSpec> sweep;
    OutputSpec output;

    CycleSpec cycle_spec() const {
        CycleSpec s;
        s.hamiltonian = hamiltonian;
        if (cycle) {
            s.ramp = cycle->ramp;
            s.stroke_time = cycle->stroke_time;
            s.measurement = cycle->measurement;
            s.stroke_mode = cycle->stroke_mode;
            s.measured_subsystem = cycle->measured_subsystem;
        }
        if (hot_bath) s.hot_bath = *hot_bath;
        if (cold_bath) s.cold_bath = *cold_bath;
        return s;
    }

    bool operator==(const RunSpec&) const = default;
};

namespace detail {

inline std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

class Object {
public:
    Object(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_.empty() ? "(root)" : path_, "expected an object");
        for (const auto& [k, v] : j_.items())
            if (!allowed.count(k)) throw SchemaError(join(path_, k), "unknown key '" + k + "'");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const std::string& key) const { return j_.at(key); }
    std::string field(const std::string& key) const { return join(path_, key); }

    void require(const std::string& key) const {
        if (!has(key)) throw SchemaError(field(key), "required field is missing");
    }

    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
    double number(const std::string& key) const {
        require(key);
        const json& v = at(key);
        if (!v.is_number()) throw SchemaError(field(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ValidationError(field(key), "finite values");
        return x;
    }
    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return number(key);
    }
    int integer(const std::string& key) const {
        require(key);
        const json& v = at(key);
        if (!v.is_number_integer()) throw SchemaError(field(key), "expected an integer");
        return v.get<int>();
    }
    std::string string(const std::string& key) const {
        require(key);
        if (!at(key).is_string()) throw SchemaError(field(key), "expected a string");
        return at(key).get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    template <class E>
    E choice(const std::string& key, const std::vector<std::pair<std::string, E>>& options, std::optional<E> fallback) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            require(key);
        }
        const std::string s = string(key);
        std::string names;
        for (const auto& [name, value] : options) {
            if (name == s) return value;
            names += (names.empty() ? "" : ", ") + name;
        }
        throw SchemaError(field(key), "'" + s + "' is not one of " + names);
    }

private:
    const json& j_;
    std::string path_;
};

inline void non_negative(const Object& o, const std::string& key, double v) {
    if (!(v >= 0.0)) throw ValidationError(o.field(key), "non-negative value");
}

inline BathSpec parse_bath(const json& j, const std::string& path, bool in_composite) {
    if (!j.is_object() || !j.contains("kind")) throw SchemaError(join(path, "kind"), "required field is missing");
    const Object peek(j, path, {"kind", "gamma_a", "gamma_b", "nbar_a", "nbar_b", "temperature_a", "temperature_b",
                                "gamma", "rate_scale", "parts"});
    const BathKind kind = peek.choice<BathKind>("kind",
                                                {{"local_thermal", BathKind::local_thermal},
                                                 {"common_coherence", BathKind::common_coherence},
                                                 {"common_dephasing", BathKind::common_dephasing},
                                                 {"bell_pump", BathKind::bell_pump},
                                                 {"composite", BathKind::composite}},
                                                std::nullopt);
    BathSpec s;
    s.kind = kind;
    switch (kind) {
    case BathKind::local_thermal: {
        const Object o(j, path,
                       {"kind", "gamma_a", "gamma_b", "nbar_a", "nbar_b", "temperature_a", "temperature_b", "rate_scale"});
        s.gamma_a = o.number("gamma_a", 1.0);
        s.gamma_b = o.number("gamma_b", 1.0);
        s.nbar_a = o.number("nbar_a", 0.0);
        s.nbar_b = o.number("nbar_b", 0.0);
        s.temperature_a = o.number("temperature_a", 0.0);
        s.temperature_b = o.number("temperature_b", 0.0);
        for (const char* k : {"gamma_a", "gamma_b", "nbar_a", "nbar_b", "temperature_a", "temperature_b"})
            non_negative(o, k, o.number(k, 0.0));
        if (s.nbar_a > 0.0 && s.temperature_a > 0.0)
            throw ValidationError(o.field("temperature_a"), "either nbar_a or temperature_a, not both");
        if (s.nbar_b > 0.0 && s.temperature_b > 0.0)
            throw ValidationError(o.field("temperature_b"), "either nbar_b or temperature_b, not both");
        s.rate_scale = o.number("rate_scale", 1.0);
        non_negative(o, "rate_scale", s.rate_scale);
        break;
    }
    case BathKind::common_coherence:
    case BathKind::common_dephasing:
    case BathKind::bell_pump:
    case BathKind::composite: {
        std::set<std::string> keys{"kind", "rate_scale"};
        if (!in_composite) keys.insert("gamma");
        if (kind == BathKind::composite) keys.insert("parts");
        const Object o(j, path, keys);
        if (!in_composite) {
            s.gamma = o.number("gamma");
            if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) throw ValidationError(o.field("gamma"), "0 <= gamma <= 1");
        }
        s.rate_scale = o.number("rate_scale", 1.0);
        non_negative(o, "rate_scale", s.rate_scale);
        if (kind == BathKind::composite) {
            if (in_composite) throw ValidationError(path, "composite baths do not nest");
            o.require("parts");
            if (!o.at("parts").is_array()) throw SchemaError(o.field("parts"), "expected an array");
            const json& parts = o.at("parts");
            if (parts.empty()) throw ValidationError(o.field("parts"), "a composite needs at least one part");
            for (std::size_t k = 0; k < parts.size(); ++k)
                s.parts.push_back(parse_bath(parts[k], join(o.field("parts"), std::to_string(k)), true));
            for (auto& p : s.parts) p.gamma = s.gamma;
        }
        break;
    }
    }
    return s;
}

inline SweepAxis parse_axis(const json& j, const std::string& path, bool allow_inner) {
    std::set<std::string> keys{"variable", "from", "to", "points"};
    if (allow_inner) keys.insert("inner");
    const Object o(j, path, keys);
    SweepAxis a;
    o.require("variable");
    const json& v = o.at("variable");
    if (v.is_string()) {
        a.variables.push_back(v.get<std::string>());
    } else if (v.is_array() && !v.empty()) {
        for (const auto& e : v) {
            if (!e.is_string()) throw SchemaError(o.field("variable"), "expected a string or a list of strings");
            a.variables.push_back(e.get<std::string>());
        }
    } else {
        throw SchemaError(o.field("variable"), "expected a string or a list of strings");
    }
    a.from = o.number("from");
    a.to = o.number("to");
    a.points = o.integer("points");
    if (a.points < 2) throw ValidationError(o.field("points"), "points >= 2");
    return a;
}

inline json::json_pointer pointer(const std::string& dotted) {
    std::string p;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ValidationError(dotted, "a dotted path without empty segments");
        p += "/" + part;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return json::json_pointer(p);
}

} // namespace detail

json to_json(const RunSpec& spec);

// Parses one configuration document. Sweep variables are checked against the
// canonical document so that every path names a real-valued setting.
inline RunSpec from_json(const json& root) {
    using detail::Object;
    const Object top(root, "", {"command", "hamiltonian", "cycle", "hot_bath", "cold_bath", "sweep", "output"});
    RunSpec spec;
    spec.command = top.choice<Command>("command",
                                       {{"steady-state", Command::steady_state},
                                        {"cycle", Command::cycle},
                                        {"sweep", Command::sweep},
                                        {"finite-time", Command::finite_time},
                                        {"discord-map", Command::discord_map}},
                                       std::nullopt);

    top.require("hamiltonian");
    const Object h(top.at("hamiltonian"), "hamiltonian", {"preset", "Jx", "Jy", "B", "field_axis"});
    spec.preset = h.choice<Preset>(
        "preset", {{"xx", Preset::xx}, {"ising_x", Preset::ising_x}, {"x_field", Preset::x_field}, {"custom", Preset::custom}},
        std::nullopt);
    auto& p = spec.hamiltonian;
    p.Jx = h.number("Jx", 0.0);
    p.Jy = h.number("Jy", 0.0);
    p.B = h.number("B", 0.0);
    if (spec.preset != Preset::custom && h.has("field_axis"))
        throw SchemaError(h.field("field_axis"), "only the custom preset takes field_axis");
    switch (spec.preset) {
    case Preset::xx:
        if (!h.has("Jy")) p.Jy = p.Jx;
        if (p.Jy != p.Jx) throw ValidationError(h.field("Jy"), "xx preset needs Jx == Jy");
        break;
    case Preset::ising_x:
        if (p.Jy != 0.0) throw ValidationError(h.field("Jy"), "ising_x preset needs Jy == 0");
        break;
    case Preset::x_field:
        p.field_axis = FieldAxis::x;
        if (p.Jx != 0.0 || p.Jy != 0.0) throw ValidationError(h.field("Jx"), "x_field preset has no coupling");
        break;
    case Preset::custom:
        p.field_axis = h.choice<FieldAxis>("field_axis", {{"z", FieldAxis::z}, {"x", FieldAxis::x}}, FieldAxis::z);
        break;
    }

    if (top.has("cycle")) {
        const Object c(top.at("cycle"), "cycle",
                       {"parameter", "P1", "P2", "tau_ramp", "stroke_time", "measurement", "stroke_mode",
                        "measured_subsystem"});
        CycleBlock b;
        b.ramp.parameter = c.choice<RampParameter>(
            "parameter",
            {{"B", RampParameter::B}, {"J", RampParameter::J}, {"Jx", RampParameter::Jx}, {"Jy", RampParameter::Jy}},
            RampParameter::B);
        b.ramp.P1 = c.number("P1");
        b.ramp.P2 = c.number("P2");
        b.ramp.tau_ramp = c.number("tau_ramp", 0.0);
        b.stroke_time = c.optional_number("stroke_time");
        b.measurement = c.choice<Measurement>(
            "measurement", {{"projective", Measurement::projective}, {"unmeasured", Measurement::unmeasured}},
            Measurement::projective);
        b.stroke_mode = c.choice<StrokeMode>("stroke_mode", {{"quench", StrokeMode::quench}, {"ramped", StrokeMode::ramped}},
                                             StrokeMode::quench);
        b.measured_subsystem = c.choice<Subsystem>("measured_subsystem", {{"a", Subsystem::a}, {"b", Subsystem::b}},
                                                   Subsystem::a);
        if (!(b.ramp.P2 > b.ramp.P1)) throw ValidationError(c.field("P2"), "compression needs P2 > P1");
        detail::non_negative(c, "tau_ramp", b.ramp.tau_ramp);
        if (b.stroke_mode == StrokeMode::ramped && !(b.ramp.tau_ramp > 0.0))
            throw ValidationError(c.field("tau_ramp"), "ramped strokes need tau_ramp > 0");
        if (b.stroke_time && !(*b.stroke_time > 0.0))
            throw ValidationError(c.field("stroke_time"), "stroke_time > 0");
        if (spec.preset == Preset::ising_x && b.ramp.parameter == RampParameter::Jy)
            throw ValidationError(c.field("parameter"), "ising_x preset needs Jy == 0");
        spec.cycle = b;
    }
    if (top.has("hot_bath")) spec.hot_bath = detail::parse_bath(top.at("hot_bath"), "hot_bath", false);
    if (top.has("cold_bath")) spec.cold_bath = detail::parse_bath(top.at("cold_bath"), "cold_bath", false);

    if (needs_cycle(spec.command)) {
        top.require("cycle");
        top.require("hot_bath");
        top.require("cold_bath");
    } else {
        top.require("hot_bath");
    }
    if (spec.command == Command::finite_time && !spec.cycle->stroke_time)
        throw SchemaError("cycle.stroke_time", "required field is missing");

    if (top.has("sweep")) {
        const json& s = top.at("sweep");
        SweepSpec sw;
        sw.outer = detail::parse_axis(s, "sweep", true);
        if (s.contains("inner") && !s.at("inner").is_null()) sw.inner = detail::parse_axis(s.at("inner"), "sweep.inner", false);
        spec.sweep = sw;
    } else if (spec.command == Command::sweep) {
        throw SchemaError("sweep", "required field is missing");
    }

    if (top.has("output")) {
        const Object o(top.at("output"), "output", {"path", "format"});
        if (o.has("path")) spec.output.path = o.string("path");
        spec.output.format = o.choice<Format>("format", {{"csv", Format::csv}, {"json", Format::json}}, Format::csv);
    }

    if (spec.sweep) {
        const json canon = to_json(spec);
        std::vector<const SweepAxis*> axes{&spec.sweep->outer};
        if (spec.sweep->inner) axes.push_back(&*spec.sweep->inner);
        for (const SweepAxis* a : axes)
            for (const auto& v : a->variables) {
                if (v.rfind("sweep", 0) == 0 || v.rfind("output", 0) == 0 || v.rfind("command", 0) == 0)
                    throw ValidationError("sweep.variable", "sweep variables name model parameters");
                const auto ptr = detail::pointer(v);
                if (!canon.contains(ptr) || !(canon.at(ptr).is_number() || canon.at(ptr).is_null()))
                    throw ValidationError("sweep.variable", "'" + v + "' must name a real-valued parameter");
            }
    }
    return spec;
}

inline RunSpec parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return from_json(root);
}

namespace detail {

inline json bath_to_json(const BathSpec& s, bool in_composite) {
    json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
    case BathKind::local_thermal:
        j["gamma_a"] = s.gamma_a;
        j["gamma_b"] = s.gamma_b;
        j["nbar_a"] = s.nbar_a;
        j["nbar_b"] = s.nbar_b;
        j["temperature_a"] = s.temperature_a;
        j["temperature_b"] = s.temperature_b;
        break;
    case BathKind::composite:
        j["parts"] = json::array();
        for (const auto& p : s.parts) j["parts"].push_back(bath_to_json(p, true));
        [[fallthrough]];
    default:
        if (!in_composite) j["gamma"] = s.gamma;
        break;
    }
    j["rate_scale"] = s.rate_scale;
    return j;
}

inline json axis_to_json(const SweepAxis& a) {
    json j;
    if (a.variables.size() == 1) j["variable"] = a.variables.front();
    else j["variable"] = a.variables;
    j["from"] = a.from;
    j["to"] = a.to;
    j["points"] = a.points;
    return j;
}

inline const char* to_string(RampParameter p) {
    switch (p) {
    case RampParameter::B: return "B";
    case RampParameter::J: return "J";
    case RampParameter::Jx: return "Jx";
    case RampParameter::Jy: return "Jy";
    }
    return "?";
}

} // namespace detail

// Canonical form: every field spelled out, defaults included.
inline json to_json(const RunSpec& spec) {
    json j;
    j["command"] = to_string(spec.command);
    json h;
    h["preset"] = to_string(spec.preset);
    h["Jx"] = spec.hamiltonian.Jx;
    h["Jy"] = spec.hamiltonian.Jy;
    h["B"] = spec.hamiltonian.B;
    if (spec.preset == Preset::custom) h["field_axis"] = spec.hamiltonian.field_axis == FieldAxis::z ? "z" : "x";
    j["hamiltonian"] = h;
    if (spec.cycle) {
        const CycleBlock& c = *spec.cycle;
        json cj;
        cj["parameter"] = detail::to_string(c.ramp.parameter);
        cj["P1"] = c.ramp.P1;
        cj["P2"] = c.ramp.P2;
        cj["tau_ramp"] = c.ramp.tau_ramp;
        cj["stroke_time"] = c.stroke_time ? json(*c.stroke_time) : json(nullptr);
        cj["measurement"] = to_string(c.measurement);
        cj["stroke_mode"] = to_string(c.stroke_mode);
        cj["measured_subsystem"] = to_string(c.measured_subsystem);
        j["cycle"] = cj;
    }
    if (spec.hot_bath) j["hot_bath"] = detail::bath_to_json(*spec.hot_bath, false);
    if (spec.cold_bath) j["cold_bath"] = detail::bath_to_json(*spec.cold_bath, false);
    if (spec.sweep) {
        json s = detail::axis_to_json(spec.sweep->outer);
        if (spec.sweep->inner) s["inner"] = detail::axis_to_json(*spec.sweep->inner);
        j["sweep"] = s;
    }
    json o;
    o["path"] = spec.output.path ? json(*spec.output.path) : json(nullptr);
    o["format"] = to_string(spec.output.format);
    j["output"] = o;
    return j;
}

// The RunSpec of one sweep point: the canonical document with each variable set,
// re-parsed so every invariant is checked again at that point.
inline RunSpec at_point(const RunSpec& spec, const std::vector<std::pair<const SweepAxis*, double>>& settings) {
    json doc = to_json(spec);
    doc.erase("sweep");
    if (spec.command == Command::sweep) doc["command"] = "cycle";
    for (const auto& [axis, value] : settings)
        for (const auto& v : axis->variables) doc[detail::pointer(v)] = value;
    RunSpec out = from_json(doc);
    out.command = spec.command;
    return out;
}

} // namespace otto::cli
