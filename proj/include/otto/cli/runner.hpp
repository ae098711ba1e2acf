#pragma once
// Executes a RunSpec: one row per sweep point, errors kept per row.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "otto/cli/config.hpp"
#include "otto/cli/emit.hpp"
#include "otto/correlations.hpp"
#include "otto/oracle.hpp"
#include "otto/thermo.hpp"

namespace otto::cli {

enum class Failure { none, config, degenerate, numerical };

inline int exit_code(Failure f) {
    switch (f) {
    case Failure::none: return 0;
    case Failure::config: return 2;
    case Failure::degenerate: return 3;
    case Failure::numerical: return 4;
    }
    return 4;
}

struct RunOutput {
    Table table;
    std::vector<Failure> failures; // one per row

    bool all_failed() const {
        return !failures.empty() &&
               std::all_of(failures.begin(), failures.end(), [](Failure f) { return f != Failure::none; });
    }
    int exit_code() const { return all_failed() ? cli::exit_code(failures.front()) : 0; }
};

inline std::vector<std::string> result_columns(Command c) {
    switch (c) {
    case Command::steady_state: {
        std::vector<std::string> cols{"r11", "r22", "r33", "r44"};
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) {
                const std::string ij = std::to_string(i) + std::to_string(j);
                cols.push_back("re_r" + ij);
                cols.push_back("im_r" + ij);
            }
        for (const char* k : {"concurrence", "discord_a", "discord_b", "mutual_information", "oracle_max_abs_dev"})
            cols.push_back(k);
        return cols;
    }
    case Command::discord_map: return {"concurrence", "discord_a", "discord_b", "mutual_information"};
    default:
        return {"W1",
                "Q1",
                "W2",
                "Q2",
                "W_T",
                "eta",
                "power",
                "concurrence_hot",
                "concurrence_cold",
                "discord_hot_pre",
                "discord_hot_post",
                "discord_cold_pre",
                "discord_cold_post",
                "oracle_W_T",
                "abs_dev_from_oracle"};
    }
}

namespace detail {

inline Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

inline std::string axis_label(const SweepAxis& a) {
    std::string s;
    for (const auto& v : a.variables) s += (s.empty() ? "" : "+") + v;
    return s;
}

inline bool is_local(const BathSpec& b) { return b.kind == BathKind::local_thermal; }

inline bool is_dephasing_pump(const BathSpec& b) {
    if (b.kind != BathKind::composite || b.parts.size() != 2) return false;
    const BathKind k0 = b.parts[0].kind, k1 = b.parts[1].kind;
    return (k0 == BathKind::common_dephasing && k1 == BathKind::bell_pump) ||
           (k0 == BathKind::bell_pump && k1 == BathKind::common_dephasing);
}

inline double magnetization(const oracle::UnequalCoefficients& c) { return 2.0 * (c.r11 - c.r44) / c.alpha; }

// Closed-form total work where one applies to this configuration.
inline std::optional<double> oracle_work(const RunSpec& s) {
    if (!s.cycle || !s.hot_bath || !s.cold_bath) return std::nullopt;
    const CycleBlock& c = *s.cycle;
    const double P1 = c.ramp.P1, P2 = c.ramp.P2;
    if (s.preset == Preset::xx && c.ramp.parameter == RampParameter::B && is_local(*s.hot_bath) &&
        is_local(*s.cold_bath)) {
        const BathSpec hot = resolve_temperatures(*s.hot_bath, P2);
        const BathSpec cold = resolve_temperatures(*s.cold_bath, P1);
        const double J = s.hamiltonian.Jx;
        if (!c.stroke_time) {
            const double mh = magnetization(oracle::xx_unequal_coefficients(J, hot.gamma_a * hot.rate_scale,
                                                                           hot.gamma_b * hot.rate_scale, hot.nbar_a,
                                                                           hot.nbar_b));
            const double mc = magnetization(oracle::xx_unequal_coefficients(J, cold.gamma_a * cold.rate_scale,
                                                                           cold.gamma_b * cold.rate_scale, cold.nbar_a,
                                                                           cold.nbar_b));
            return (P2 - P1) * (mh - mc);
        }
        const double g = hot.gamma_a * hot.rate_scale;
        const bool uniform = hot.gamma_b * hot.rate_scale == g && cold.gamma_a * cold.rate_scale == g &&
                             cold.gamma_b * cold.rate_scale == g && hot.nbar_a == hot.nbar_b &&
                             cold.nbar_a == cold.nbar_b && g > 0.0;
        if (uniform) return oracle::finite_time_limit_cycle(P1, P2, cold.nbar_a, hot.nbar_a, g, *c.stroke_time).cycle.W_T;
        return std::nullopt;
    }
    if (s.preset == Preset::ising_x && c.ramp.parameter == RampParameter::J && !c.stroke_time &&
        is_dephasing_pump(*s.hot_bath) && is_dephasing_pump(*s.cold_bath) && s.hot_bath->gamma == 0.0 &&
        s.hot_bath->rate_scale > 0.0 && s.cold_bath->rate_scale > 0.0)
        return oracle::bell_pump_engine(P1, P2, s.cold_bath->gamma).W_T;
    return std::nullopt;
}

inline Row cycle_row(const RunSpec& s) {
    const CycleReport rep = run_cycle(s.cycle_spec());
    std::optional<double> power;
    if (s.cycle->stroke_time) power = rep.W_T / (2.0 * *s.cycle->stroke_time);
    const std::optional<double> oracle = oracle_work(s);
    std::optional<double> dev;
    if (oracle) dev = std::abs(rep.W_T - *oracle);
    return {rep.W1,
            rep.Q1,
            rep.W2,
            rep.Q2,
            rep.W_T,
            opt(rep.eta),
            opt(power),
            rep.hot->concurrence_pre,
            rep.cold->concurrence_pre,
            rep.hot->discord_pre.discord,
            rep.hot->discord_post.discord,
            rep.cold->discord_pre.discord,
            rep.cold->discord_post.discord,
            opt(oracle),
            opt(dev)};
}

inline DensityMatrix bath_steady_state(const RunSpec& s) {
    const BathSpec bath = resolve_temperatures(*s.hot_bath, s.hamiltonian.B);
    return steady_state(liouvillian(build_hamiltonian(s.hamiltonian), build_bath(bath))).state;
}

inline Row steady_state_row(const RunSpec& s) {
    const DensityMatrix rho = bath_steady_state(s);
    Row r;
    for (int i = 0; i < 4; ++i) r.push_back(rho(i, i).real());
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            r.push_back(rho(i, j).real());
            r.push_back(rho(i, j).imag());
        }
    r.push_back(concurrence(rho));
    r.push_back(quantum_discord(rho, Subsystem::a).discord);
    r.push_back(quantum_discord(rho, Subsystem::b).discord);
    r.push_back(mutual_information(rho));
    Cell dev;
    if (s.preset == Preset::xx && is_local(*s.hot_bath)) {
        const BathSpec b = resolve_temperatures(*s.hot_bath, s.hamiltonian.B);
        const auto cf = oracle::xx_unequal_steady_state(s.hamiltonian.Jx, b.gamma_a * b.rate_scale,
                                                        b.gamma_b * b.rate_scale, b.nbar_a, b.nbar_b);
        dev = max_abs(rho.mat() - cf.mat());
    }
    r.push_back(dev);
    return r;
}

inline Row discord_map_row(const RunSpec& s) {
    const DensityMatrix rho = bath_steady_state(s);
    return {concurrence(rho), quantum_discord(rho, Subsystem::a).discord, quantum_discord(rho, Subsystem::b).discord,
            mutual_information(rho)};
}

inline Row evaluate(const RunSpec& s) {
    switch (s.command) {
    case Command::steady_state: return steady_state_row(s);
    case Command::discord_map: return discord_map_row(s);
    default: return cycle_row(s);
    }
}

struct Point {
    std::vector<double> coords;
    std::vector<std::pair<const SweepAxis*, double>> settings;
};

inline std::vector<Point> points(const RunSpec& s) {
    if (!s.sweep) return {Point{}};
    std::vector<Point> out;
    for (double x : s.sweep->outer.values()) {
        if (!s.sweep->inner) {
            out.push_back({{x}, {{&s.sweep->outer, x}}});
            continue;
        }
        for (double y : s.sweep->inner->values()) out.push_back({{x, y}, {{&s.sweep->outer, x}, {&*s.sweep->inner, y}}});
    }
    return out;
}

} // namespace detail

inline RunOutput run(const RunSpec& spec, int jobs = 1) {
    RunOutput out;
    if (spec.sweep) {
        out.table.columns.push_back(detail::axis_label(spec.sweep->outer));
        if (spec.sweep->inner) out.table.columns.push_back(detail::axis_label(*spec.sweep->inner));
    }
    const auto result_cols = result_columns(spec.command);
    out.table.columns.insert(out.table.columns.end(), result_cols.begin(), result_cols.end());
    out.table.columns.push_back("error");

    const auto pts = detail::points(spec);
    out.table.rows.resize(pts.size());
    out.failures.assign(pts.size(), Failure::none);

    auto work = [&](std::size_t k) {
        Row row(pts[k].coords.begin(), pts[k].coords.end());
        Row body;
        std::string error;
        Failure f = Failure::none;
        try {
            body = detail::evaluate(spec.sweep ? at_point(spec, pts[k].settings) : spec);
        } catch (const ConfigError& e) {
            f = Failure::config, error = e.what();
        } catch (const InvalidSpec& e) {
            f = Failure::config, error = e.what();
        } catch (const OutOfRange& e) {
            f = Failure::config, error = e.what();
        } catch (const DegenerateSteadyState& e) {
            f = Failure::degenerate, error = e.what();
        } catch (const std::exception& e) {
            f = Failure::numerical, error = e.what();
        }
        if (f != Failure::none) body.assign(result_cols.size(), Cell());
        row.insert(row.end(), body.begin(), body.end());
        row.push_back(error.empty() ? Cell() : Cell(error));
        out.table.rows[k] = std::move(row);
        out.failures[k] = f;
    };

    const std::size_t n = pts.size();
    std::size_t threads = jobs > 0 ? std::size_t(jobs) : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) work(k);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) work(k);
        });
    for (auto& th : pool) th.join();
    return out;
}

} // namespace otto::cli
