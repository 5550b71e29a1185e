// config.hpp - JSON run configuration: scenario selection, grid, integrator
// settings, and output paths.

#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "../dynamics/model.hpp"
#include "../scenarios/oscillator.hpp"
#include "../scenarios/qubit.hpp"

namespace qfigrow {

// Configuration problems exit with a dedicated status so scripts can tell
// them apart from bound violations.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GridSpec {
    double t_end = 8.0;
    std::size_t points = 161;
};

struct OutputSpec {
    std::string csv_path;
    std::string svg_path;  // empty = no SVG
};

struct QubitParams {
    double epsilon = 1.0;
    double gamma_d = 1.0;
};

struct RunConfig {
    std::string scenario;  // "dephasing_qubit" or "damped_oscillator"
    QubitParams qubit;
    OscillatorSpec oscillator;
    StateSpec state{StateKind::ground, 0.0, 0, 1.0};
    GridSpec grid;
    IntegratorConfig integrator;
    double rank_tol = 1e-12;
    bool with_optimized_bound = true;
    std::size_t optimize_stride = 1;  // evaluate the optimized rate every k-th point
    unsigned long long seed = 1;
    std::vector<OutputSpec> outputs;
};

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

inline cplx get_complex(const nlohmann::json& j, const std::string& key, cplx fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_number()) return cplx{v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx{v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("field '" + key + "': expected number or [re, im] pair");
}

inline StateSpec parse_state(const nlohmann::json& j) {
    StateSpec s{StateKind::ground, 0.0, 0, 1.0};
    if (!j.contains("state")) return s;
    const auto& st = j.at("state");
    if (!st.is_object()) throw ConfigError("field 'state': expected object");
    const std::string kind = get_or<std::string>(st, "kind", "ground");
    if (kind == "ground")
        s.kind = StateKind::ground;
    else if (kind == "coherent")
        s.kind = StateKind::coherent;
    else if (kind == "fock")
        s.kind = StateKind::fock;
    else if (kind == "squeezed_coherent")
        s.kind = StateKind::squeezed_coherent;
    else
        throw ConfigError("field 'state.kind': unknown kind '" + kind + "'");
    s.amplitude = get_complex(st, "amplitude", 0.0);
    s.n = get_or<std::size_t>(st, "n", 0);
    s.squeeze = get_or<double>(st, "squeeze", 1.0);
    return s;
}

inline ForcingKind parse_forcing(const std::string& name) {
    if (name == "linear") return ForcingKind::linear;
    if (name == "quadratic") return ForcingKind::quadratic;
    if (name == "two_photon") return ForcingKind::two_photon;
    throw ConfigError("field 'forcing': unknown kind '" + name + "'");
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("top level: expected object");
    RunConfig cfg;
    cfg.scenario = detail::get_or<std::string>(j, "scenario", "");
    if (cfg.scenario.empty()) throw ConfigError("field 'scenario': missing or empty");
    if (cfg.scenario != "dephasing_qubit" && cfg.scenario != "damped_oscillator")
        throw ConfigError("field 'scenario': unknown scenario '" + cfg.scenario + "'");

    if (j.contains("qubit")) {
        const auto& q = j.at("qubit");
        if (!q.is_object()) throw ConfigError("field 'qubit': expected object");
        cfg.qubit.epsilon = detail::get_or<double>(q, "epsilon", 1.0);
        cfg.qubit.gamma_d = detail::get_or<double>(q, "gamma_d", 1.0);
        if (cfg.qubit.gamma_d < 0.0) throw ConfigError("field 'qubit.gamma_d': must be >= 0");
    }
    if (j.contains("oscillator")) {
        const auto& o = j.at("oscillator");
        if (!o.is_object()) throw ConfigError("field 'oscillator': expected object");
        OscillatorSpec& s = cfg.oscillator;
        s.n_max = detail::get_or<std::size_t>(o, "n_max", 40);
        s.gamma = detail::get_or<double>(o, "gamma", 1.0);
        s.n_T = detail::get_or<double>(o, "n_T", 0.0);
        s.epsilon = detail::get_complex(o, "epsilon", 1.0);
        s.detuning = detail::get_or<double>(o, "detuning", 0.0);
        s.forcing_kind = detail::parse_forcing(detail::get_or<std::string>(o, "forcing", "linear"));
        s.extra_damping = detail::get_or<double>(o, "extra_damping", 0.0);
        s.extra_damping_on_time = detail::get_or<double>(o, "extra_damping_on_time", 0.0);
        try {
            s.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("field 'oscillator': ") + e.what());
        }
        cfg.state = detail::parse_state(o);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("field 'grid': expected object");
        cfg.grid.t_end = detail::get_or<double>(g, "t_end", 8.0);
        cfg.grid.points = detail::get_or<std::size_t>(g, "points", 161);
        if (!(cfg.grid.t_end > 0.0)) throw ConfigError("field 'grid.t_end': must be positive");
        if (cfg.grid.points < 2) throw ConfigError("field 'grid.points': need at least 2");
    }
    if (j.contains("integrator")) {
        const auto& it = j.at("integrator");
        if (!it.is_object()) throw ConfigError("field 'integrator': expected object");
        cfg.integrator.step = detail::get_or<double>(it, "step", 1e-2);
        cfg.integrator.substep_refinement =
            detail::get_or<std::size_t>(it, "substep_refinement", 1);
        cfg.integrator.hermitize_each_step =
            detail::get_or<bool>(it, "hermitize_each_step", true);
        try {
            cfg.integrator.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("field 'integrator': ") + e.what());
        }
    }
    cfg.rank_tol = detail::get_or<double>(j, "rank_tol", 1e-12);
    if (!(cfg.rank_tol > 0.0)) throw ConfigError("field 'rank_tol': must be positive");
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        if (!b.is_object()) throw ConfigError("field 'bounds': expected object");
        cfg.with_optimized_bound = detail::get_or<bool>(b, "optimized", true);
        cfg.optimize_stride = detail::get_or<std::size_t>(b, "optimize_stride", 1);
        if (cfg.optimize_stride < 1) throw ConfigError("field 'bounds.optimize_stride': must be >= 1");
    }
    cfg.seed = detail::get_or<unsigned long long>(j, "seed", 1);
    if (j.contains("outputs")) {
        const auto& outs = j.at("outputs");
        if (!outs.is_array()) throw ConfigError("field 'outputs': expected array");
        for (const auto& o : outs) {
            OutputSpec spec;
            spec.csv_path = detail::get_or<std::string>(o, "csv", "");
            spec.svg_path = detail::get_or<std::string>(o, "svg", "");
            if (spec.csv_path.empty()) throw ConfigError("field 'outputs[].csv': missing");
            cfg.outputs.push_back(spec);
        }
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace qfigrow
