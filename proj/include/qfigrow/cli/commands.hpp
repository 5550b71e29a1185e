// commands.hpp - run/fig1/fig2 subcommand implementations. Each figure command
// recomputes its panels from scratch and enforces the published qualitative
// claims before anything is written; a failed claim aborts the emission.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "../bounds/curves.hpp"
#include "../bounds/rate_bound.hpp"
#include "../dynamics/lindblad.hpp"
#include "../dynamics/propagate.hpp"
#include "../fisher/rates.hpp"
#include "../scenarios/oscillator.hpp"
#include "../scenarios/protocols.hpp"
#include "../scenarios/qubit.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "svg.hpp"

namespace qfigrow {

// A violated figure or run assertion; mapped to exit code 1 by the CLI.
struct CheckFailure : std::runtime_error {
    explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void check(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure("check failed: " + what);
}

inline std::string num(double v) { return format_double(v); }

}  // namespace detail

struct ScenarioBundle {
    ParamModel model;
    Cmat rho0;
    BoundConstants constants;
};

inline ScenarioBundle make_scenario(const RunConfig& cfg) {
    ScenarioBundle b;
    if (cfg.scenario == "dephasing_qubit") {
        b.model = dephasing_qubit(cfg.qubit.epsilon, cfg.qubit.gamma_d);
        b.rho0 = plus_state_density();
        const double eps = std::abs(cfg.qubit.epsilon);
        if (cfg.qubit.gamma_d > 0.0) {
            b.constants.c0 = 0.0;
            b.constants.c1 = eps;
            b.constants.c2 = eps * eps / (4.0 * cfg.qubit.gamma_d);
            if (eps > 0.0) b.constants.t_c = hls_tc(b.constants.c1, b.constants.c2);
        } else {
            // No noise channel: the derivative operator is entirely remainder.
            b.constants.c0 = eps;
            b.constants.c1 = eps;
            b.constants.c2 = 0.0;
        }
    } else if (cfg.scenario == "damped_oscillator") {
        b.rho0 = make_state(cfg.state, cfg.oscillator.n_max);
        b.model = damped_oscillator(cfg.oscillator);
        b.constants = oscillator_constants(cfg.oscillator, b.rho0);
    } else {
        throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    }
    b.constants.validate();
    return b;
}

namespace detail {

// Integrated optimized bound along the trajectory's time grid. States between
// stored points are convex combinations of their neighbors, which keeps them
// valid density matrices; a reused decomposition stays a true (looser) bound
// because the model operators are constant in time here.
inline std::vector<double> optimized_curve_samples(const std::vector<TrajectoryPoint>& traj,
                                                   const ParamModel& model, double rank_tol,
                                                   std::size_t stride, double rel_tol) {
    std::vector<double> times;
    times.reserve(traj.size());
    for (const auto& pt : traj) times.push_back(pt.t);

    auto rho_at = [&](double t) -> Cmat {
        if (t <= times.front()) return traj.front().rho;
        if (t >= times.back()) return traj.back().rho;
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (times[mid] <= t ? lo : hi) = mid;
        }
        const double w = (t - times[lo]) / (times[lo + 1] - times[lo]);
        Cmat rho = traj[lo].rho;
        rho *= cplx{1.0 - w, 0.0};
        Cmat other = traj[lo + 1].rho;
        other *= cplx{w, 0.0};
        rho += other;
        return hermitize(rho);
    };

    SpanDecomposition cached;
    bool have_cached = false;
    std::size_t calls = 0;
    const bool must_reoptimize = model.time_dependent || stride <= 1;
    auto rate = [&](double t, double f) {
        const Cmat rho = rho_at(t);
        const bool full = must_reoptimize || !have_cached || (calls % stride) == 0;
        ++calls;
        if (full) {
            const auto opt = optimize_rate_bound(rho, f, model.hamiltonian_deriv(t, 0.0),
                                                 detail::OpSet::at(model, t, 0.0).L, rank_tol);
            cached = opt.decomposition;
            have_cached = true;
            return opt.bound;
        }
        return rate_bound(rho, f, cached, rank_tol);
    };

    const double f0 = std::max(traj.front().qfi, 0.0);
    return integrate_rate_bound(rate, f0, times, rel_tol).samples;
}

// Plain multi-column CSV for sweep and rate data (not a CurveTable).
inline void write_xy_csv(const std::string& path, const std::string& header,
                         const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_xy_csv: no columns");
    for (const auto& c : columns)
        if (c.size() != columns.front().size())
            throw std::invalid_argument("write_xy_csv: ragged columns");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << header << "\n";
    for (std::size_t r = 0; r < columns.front().size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ",";
            out << format_double(columns[c][r]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace detail

struct RunResult {
    CurveTable table;
    BoundConstants constants;
    std::vector<std::string> written;
};

// Simulates the configured scenario and fills every bound column that is valid
// for its constants: closed-form columns only when the derivative operator
// lies in the channel span (c0 = 0), the quadratic prior whenever c1 > 0, the
// numerically integrated optimized bound on request.
inline RunResult run_command(const RunConfig& cfg, std::ostream& log) {
    RunResult out;
    const ScenarioBundle bundle = make_scenario(cfg);
    out.constants = bundle.constants;
    const BoundConstants& c = bundle.constants;

    const auto grid = detail::linspace(0.0, cfg.grid.t_end, cfg.grid.points);
    const Cmat zero(bundle.model.dim, bundle.model.dim);
    auto traj = propagate(bundle.model, bundle.rho0, zero, 0.0, grid, cfg.integrator);
    annotate_trajectory(traj, bundle.model, 0.0, cfg.rank_tol);

    const bool in_span = c.c0 <= 1e-12 * std::max(1.0, c.c1);
    const bool has_hls = in_span && c.c1 > 0.0 && c.c2 > 0.0;
    const bool has_hnls = c.c1 > 0.0;
    std::vector<double> optimized;
    if (cfg.with_optimized_bound)
        optimized = detail::optimized_curve_samples(traj, bundle.model, cfg.rank_tol,
                                                    cfg.optimize_stride, 1e-8);

    for (std::size_t i = 0; i < traj.size(); ++i) {
        CurveRow row;
        row.t = traj[i].t;
        row.qfi_sim = traj[i].qfi;
        row.qfi_rate_sim = traj[i].qfi_rate;
        if (cfg.with_optimized_bound) row.bound_optimized = optimized[i];
        if (has_hls) {
            row.bound_hls = hls_curve(c.c1, c.c2, row.t);
            row.bound_prior_linear = prior_curve(PriorKind::linear, c.c2, row.t);
        }
        if (has_hnls) {
            row.bound_hnls = hnls_curve(c.c0, c.c1, c.c2, row.t);
            row.bound_prior_quadratic = prior_curve(PriorKind::quadratic, c.c1 * c.c1, row.t);
        }
        out.table.rows.push_back(row);
    }

    log << "scenario " << cfg.scenario << ": " << out.table.rows.size() << " rows to t = "
        << cfg.grid.t_end << ", constants c0 = " << c.c0 << ", c1 = " << c.c1
        << ", c2 = " << c.c2 << "\n";
    for (const auto& spec : cfg.outputs) {
        write_csv(out.table, spec.csv_path);
        out.written.push_back(spec.csv_path);
        log << "wrote " << spec.csv_path << "\n";
        if (!spec.svg_path.empty()) {
            std::vector<SvgSeries> series;
            auto add = [&](const char* label, const char* color, bool dashed, auto getter) {
                SvgSeries s;
                s.label = label;
                s.color = color;
                s.dashed = dashed;
                for (const auto& row : out.table.rows) {
                    const auto v = getter(row);
                    if (v) s.points.push_back({row.t, *v});
                }
                if (!s.points.empty()) series.push_back(std::move(s));
            };
            add("simulated", "#c0392b", false, [](const CurveRow& r) { return r.qfi_sim; });
            add("optimized bound", "#8e44ad", false,
                [](const CurveRow& r) { return r.bound_optimized; });
            add("closed-form bound", "#1f2d3d", false,
                [](const CurveRow& r) { return r.bound_hls ? r.bound_hls : r.bound_hnls; });
            add("linear prior", "#888888", true,
                [](const CurveRow& r) { return r.bound_prior_linear; });
            add("quadratic prior", "#bbbbbb", true,
                [](const CurveRow& r) { return r.bound_prior_quadratic; });
            SvgOptions opt;
            opt.title = cfg.scenario;
            opt.y_label = "F";
            write_svg(series, opt, spec.svg_path);
            out.written.push_back(spec.svg_path);
            log << "wrote " << spec.svg_path << "\n";
        }
    }
    return out;
}

namespace detail {

struct Fig1Panel {
    std::string name;
    StateSpec state;
};

}  // namespace detail

// Four panels: QFI trajectories of the damped oscillator started in the ground
// and Fock-2 states against their closed-form bounds, plus the corresponding
// growth rates against the instantaneous envelope.
inline void fig1_command(const std::string& out_dir, std::ostream& log) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const double tc = 2.0 * std::log(2.0);
    detail::check(std::abs(hls_curve(1.0, 1.0, tc) - 4.0) <= 1e-9, "curve value 4 at crossover");
    detail::check(std::abs(hls_curve(1.0, 1.0, tc + 1.0) - 8.0) <= 1e-9,
                  "curve value 8 one unit past crossover");
    detail::check(std::abs(hls_tc(std::sqrt(5.0), 1.0) - 0.4 * std::log(2.0)) <= 1e-12,
                  "Fock-2 crossover time");
    detail::check(std::abs(analytic_coherent_qfi({1.0, 0.0}, 1.0, 40.0) - 16.0) <= 1e-6 * 16.0,
                  "coherent asymptote 16");

    OscillatorSpec spec;
    spec.n_max = 12;
    spec.gamma = 1.0;
    spec.epsilon = {1.0, 0.0};

    IntegratorConfig config;
    config.step = 0.0025;

    const auto grid = detail::linspace(0.0, 8.0, 161);
    const std::vector<detail::Fig1Panel> panels = {
        {"ground", {StateKind::ground, 0.0, 0, 1.0}},
        {"fock2", {StateKind::fock, 0.0, 2, 1.0}},
    };

    for (const auto& panel : panels) {
        const Cmat rho0 = make_state(panel.state, spec.n_max);
        const BoundConstants c = oscillator_constants(spec, rho0);
        const ParamModel model = damped_oscillator(spec);
        const Cmat zero(spec.n_max, spec.n_max);
        auto traj = propagate(model, rho0, zero, 0.0, grid, config);
        annotate_trajectory(traj, model, 0.0);

        CurveTable table;
        std::vector<double> ts, rates, envelope;
        for (const auto& pt : traj) {
            CurveRow row;
            row.t = pt.t;
            row.qfi_sim = pt.qfi;
            row.qfi_rate_sim = pt.qfi_rate;
            row.bound_hls = hls_curve(c.c1, c.c2, pt.t);
            row.bound_hnls = hnls_curve(c.c0, c.c1, c.c2, pt.t);
            row.bound_prior_linear = prior_curve(PriorKind::linear, c.c2, pt.t);
            row.bound_prior_quadratic = prior_curve(PriorKind::quadratic, c.c1 * c.c1, pt.t);
            table.rows.push_back(row);

            ts.push_back(pt.t);
            rates.push_back(pt.qfi_rate);
            envelope.push_back(hls_rate(c.c1, c.c2, std::max(pt.qfi, 0.0)));
            detail::check(pt.qfi_rate <= envelope.back() + 1e-6,
                          panel.name + " rate exceeds envelope at t = " + detail::num(pt.t));
            detail::check(pt.qfi_rate <= 4.0 * c.c2 + 1e-6,
                          panel.name + " rate exceeds flat cap at t = " + detail::num(pt.t));
        }

        if (panel.name == "ground") {
            for (const auto& pt : traj) {
                const double exact = analytic_coherent_qfi(spec.epsilon, spec.gamma, pt.t);
                detail::check(std::abs(pt.qfi - exact) <= 1e-6 * std::max(1.0, exact),
                              "ground trajectory departs closed form at t = " + detail::num(pt.t));
            }
            // Rate at the crossover point itself.
            auto at_tc = propagate(model, rho0, zero, 0.0, {0.0, c.t_c}, config);
            const SLD sld = solve_sld(at_tc.back().rho, at_tc.back().rho_prime);
            const double rate_tc = qfi_rate(at_tc.back().rho, sld, model, c.t_c, 0.0);
            detail::check(std::abs(rate_tc - 4.0 * c.c2) <= 1e-4,
                          "crossover rate " + detail::num(rate_tc) + " misses flat cap");
            detail::check(std::abs(*table.rows[1].bound_prior_linear - 4.0 * c.c2 * grid[1]) <=
                              1e-12,
                          "linear prior column is not 4 c2 t");
        }

        const std::string csv_path = out_dir + "/fig1_" + panel.name + ".csv";
        write_csv(table, csv_path);
        const std::string rate_csv = out_dir + "/fig1_" + panel.name + "_rate.csv";
        detail::write_xy_csv(rate_csv, "t,qfi_rate_sim,rate_envelope", {ts, rates, envelope});

        std::vector<SvgSeries> fser;
        auto col = [&](const char* label, const char* color, bool dashed, auto getter) {
            SvgSeries s;
            s.label = label;
            s.color = color;
            s.dashed = dashed;
            for (const auto& row : table.rows)
                if (auto v = getter(row)) s.points.push_back({row.t, *v});
            fser.push_back(std::move(s));
        };
        col("simulated", "#c0392b", false, [](const CurveRow& r) { return r.qfi_sim; });
        col("growth bound", "#1f2d3d", false, [](const CurveRow& r) { return r.bound_hls; });
        col("linear prior", "#888888", true,
            [](const CurveRow& r) { return r.bound_prior_linear; });
        col("quadratic prior", "#bbbbbb", true,
            [](const CurveRow& r) { return r.bound_prior_quadratic; });
        SvgOptions fopt;
        fopt.title = "QFI vs bounds, " + panel.name + " start";
        fopt.y_label = "F";
        write_svg(fser, fopt, out_dir + "/fig1_" + panel.name + ".svg");

        std::vector<SvgSeries> rser(2);
        rser[0].label = "simulated rate";
        rser[0].color = "#c0392b";
        rser[1].label = "envelope";
        rser[1].color = "#1f2d3d";
        rser[1].dashed = true;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            rser[0].points.push_back({ts[i], rates[i]});
            rser[1].points.push_back({ts[i], envelope[i]});
        }
        SvgOptions ropt;
        ropt.title = "QFI growth rate, " + panel.name + " start";
        ropt.y_label = "dF/dt";
        write_svg(rser, ropt, out_dir + "/fig1_" + panel.name + "_rate.svg");

        log << "panel " << panel.name << ": c1 = " << c.c1 << ", c2 = " << c.c2
            << ", final F = " << traj.back().qfi << "\n";
    }
    log << "fig1 panels written to " << out_dir << "\n";
}

namespace detail {

inline void check_symmetric(const std::vector<double>& grid, const std::vector<double>& value,
                            double scale, const std::string& name) {
    for (std::size_t i = 0, j = grid.size() - 1; i < j; ++i, --j) {
        check(std::abs(grid[i] + grid[j]) <= 1e-12, name + " grid not symmetric");
        check(std::abs(value[i] - value[j]) <= 1e-3 * scale,
              name + " asymmetric at detuning " + num(grid[i]) + ": " + num(value[i]) + " vs " +
                  num(value[j]));
    }
}

inline std::vector<SvgSeries> sweep_series(
    const std::vector<std::pair<std::string, const SweepResult*>>& sweeps) {
    const char* colors[] = {"#1f2d3d", "#c0392b", "#2980b9", "#27ae60"};
    std::vector<SvgSeries> out;
    std::size_t k = 0;
    for (const auto& [label, sweep] : sweeps) {
        SvgSeries s;
        s.label = label;
        s.color = colors[k % 4];
        s.dashed = k > 0 && k % 2 == 0;
        for (std::size_t i = 0; i < sweep->detuning.size(); ++i)
            s.points.push_back({sweep->detuning[i], sweep->value[i]});
        out.push_back(std::move(s));
        ++k;
    }
    return out;
}

}  // namespace detail

// Left panel: detuning response of the settled information flow at critical
// coupling plus per-time QFI sweeps of ground vs squeezed preparations.
// Right panel: prepare-measure-reset classical information per time for Fock-0
// vs Fock-4 preparations at their own optimal cycle times.
inline void fig2_command(const std::string& out_dir, std::ostream& log) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    // The critical sweep runs in the lab frame, so its step is set by RK4
    // stability for the fastest coherence, |delta|_max * (n_max - 1) * h < 2.8,
    // with a factor-2 margin. The per-time sweeps run in the rotating frame
    // where the step only has to resolve the forcing phase |delta|_max * h.
    IntegratorConfig sweep_cfg;
    sweep_cfg.step = 0.01;

    // Critical coupling: readout rate matched to the intrinsic damping.
    OscillatorSpec crit;
    crit.n_max = 12;
    crit.gamma = 1.0;
    crit.epsilon = {1.0, 0.0};
    crit.extra_damping = 1.0;
    const StateSpec ground{StateKind::ground, 0.0, 0, 1.0};
    const auto crit_grid = detail::linspace(-10.0, 10.0, 41);
    const SweepResult crit_sweep =
        detuning_sweep(crit, ground, crit_grid, 12.0, SweepMetric::accessible_rate, 0.0,
                       sweep_cfg);
    detail::check(crit_sweep.converged, "critical-coupling sweep did not settle");
    detail::check(std::abs(crit_sweep.peak_value - 4.0) <= 0.02 * 4.0,
                  "on-resonance settled rate " + detail::num(crit_sweep.peak_value) +
                      " misses 4 |eps|^2 / gamma by more than 2%");
    detail::check(std::abs(crit_sweep.peak_detuning) <= 0.5 + 1e-12,
                  "critical sweep peak off resonance");
    detail::check_symmetric(crit_sweep.detuning, crit_sweep.value, crit_sweep.peak_value,
                            "critical sweep");
    detail::check(crit_sweep.value.front() <= 0.05 * crit_sweep.peak_value,
                  "critical sweep does not decay at large detuning");

    // Per-time QFI sweeps at a common target rate, half the ground state's
    // resonant optimum. The squeezed preparation grows QFI four times faster
    // at early times, sustains the target with a correspondingly shorter
    // cycle, and so holds it over a wider detuning band at the same height.
    OscillatorSpec avg_spec = crit;
    avg_spec.extra_damping = 0.0;
    const auto avg_grid = detail::linspace(-24.0, 24.0, 145);
    const SweepResult avg_ground =
        detuning_sweep(avg_spec, ground, avg_grid, 8.0, SweepMetric::avg_qfi, 0.0, sweep_cfg);

    OscillatorSpec sq_spec = avg_spec;
    sq_spec.n_max = 24;
    const StateSpec squeezed{StateKind::squeezed_coherent, 0.0, 0, 4.0};
    IntegratorConfig sq_cfg = sweep_cfg;
    sq_cfg.leakage_tol = 1e-5;
    const SweepResult avg_squeezed = detuning_sweep(sq_spec, squeezed, avg_grid, 8.0,
                                                    SweepMetric::avg_qfi,
                                                    avg_ground.target_rate, sq_cfg);

    detail::check(std::abs(avg_ground.peak_detuning) <= 0.3, "ground per-time peak off resonance");
    detail::check(std::abs(avg_squeezed.peak_detuning) <= 0.3,
                  "squeezed per-time peak off resonance");
    detail::check_symmetric(avg_ground.detuning, avg_ground.value, avg_ground.peak_value,
                            "ground per-time sweep");
    detail::check_symmetric(avg_squeezed.detuning, avg_squeezed.value, avg_squeezed.peak_value,
                            "squeezed per-time sweep");
    for (const SweepResult* s : {&avg_ground, &avg_squeezed})
        detail::check(std::abs(s->peak_value - avg_ground.target_rate) <=
                          0.1 * avg_ground.target_rate,
                      "per-time sweep peak " + detail::num(s->peak_value) +
                          " away from the common target " + detail::num(avg_ground.target_rate));
    detail::check(avg_squeezed.t1_star < avg_ground.t1_star,
                  "squeezed optimal cycle not shorter: " + detail::num(avg_squeezed.t1_star) +
                      " vs " + detail::num(avg_ground.t1_star));
    detail::check(avg_squeezed.t1_cycle < 0.5 * avg_ground.t1_cycle,
                  "squeezed sustaining cycle not shorter: " + detail::num(avg_squeezed.t1_cycle) +
                      " vs " + detail::num(avg_ground.t1_cycle));
    const double fwhm_ratio = avg_squeezed.fwhm / avg_ground.fwhm;
    detail::check(fwhm_ratio >= 2.0 && fwhm_ratio <= 8.0,
                  "squeezed/ground bandwidth ratio " + detail::num(fwhm_ratio) +
                      " outside [2, 8]");

    // Right panel: repeated short cycles measured by photon counting.
    OscillatorSpec pm;
    pm.n_max = 16;
    pm.gamma = 1.0;
    pm.epsilon = {1.0, 0.0};
    IntegratorConfig pm_cfg;
    pm_cfg.step = 0.005;

    const StateSpec fock0{StateKind::fock, 0.0, 0, 1.0};
    const StateSpec fock4{StateKind::fock, 0.0, 4, 1.0};

    std::vector<double> t1_grid0;
    for (double t = 0.1; t <= 6.0 + 1e-9; t += 0.05) t1_grid0.push_back(t);
    std::vector<double> t1_grid4;
    for (double t = 0.02; t <= 1.0 + 1e-9; t += 0.02) t1_grid4.push_back(t);
    for (double t = 1.1; t <= 4.0 + 1e-9; t += 0.1) t1_grid4.push_back(t);

    auto best_cycle = [&](const StateSpec& state, const std::vector<double>& t1_grid,
                          std::vector<MeasureCycle>& cycles) {
        cycles = measurement_cycle_curve(state, pm, t1_grid, 0.0, pm_cfg);
        std::size_t best = 0;
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            detail::check(cycles[i].classical_fi <=
                              cycles[i].qfi + 1e-9 * (1.0 + cycles[i].qfi),
                          "classical information exceeds QFI at t1 = " +
                              detail::num(t1_grid[i]));
            if (cycles[i].classical_fi_per_time > cycles[best].classical_fi_per_time) best = i;
        }
        return best;
    };

    std::vector<MeasureCycle> cycles0, cycles4;
    const std::size_t best0 = best_cycle(fock0, t1_grid0, cycles0);
    const std::size_t best4 = best_cycle(fock4, t1_grid4, cycles4);
    const double t1_star0 = t1_grid0[best0];
    const double t1_star4 = t1_grid4[best4];
    detail::check(t1_star0 >= 1.5 && t1_star0 <= 3.5,
                  "vacuum-start optimal cycle " + detail::num(t1_star0) + " outside [1.5, 3.5]");
    detail::check(t1_star4 < 0.5,
                  "Fock-4 optimal cycle " + detail::num(t1_star4) + " not short");
    detail::check(t1_star4 < t1_star0, "Fock-4 optimal cycle not shorter than vacuum one");
    detail::check(cycles0.front().classical_fi_per_time <=
                      0.3 * cycles0[best0].classical_fi_per_time,
                  "cycle information does not vanish as t1 -> 0");

    const auto pm_grid = detail::linspace(-15.0, 15.0, 61);
    auto pm_sweep = [&](const StateSpec& state, double t1) {
        std::vector<double> values;
        for (double delta : pm_grid) {
            OscillatorSpec s = pm;
            s.detuning = delta;
            const MeasureCycle cyc = prepare_measure_reset(state, s, t1, 0.0, pm_cfg);
            detail::check(cyc.classical_fi <= cyc.qfi + 1e-9 * (1.0 + cyc.qfi),
                          "classical information exceeds QFI at detuning " + detail::num(delta));
            values.push_back(cyc.classical_fi_per_time);
        }
        return values;
    };
    const std::vector<double> pm0 = pm_sweep(fock0, t1_star0);
    const std::vector<double> pm4 = pm_sweep(fock4, t1_star4);

    const double peak0 = *std::max_element(pm0.begin(), pm0.end());
    const double peak4 = *std::max_element(pm4.begin(), pm4.end());
    detail::check_symmetric(pm_grid, pm0, peak0, "Fock-0 cycle sweep");
    detail::check_symmetric(pm_grid, pm4, peak4, "Fock-4 cycle sweep");
    const double fwhm0 = detail::fwhm_of(pm_grid, pm0);
    const double fwhm4 = detail::fwhm_of(pm_grid, pm4);
    detail::check(fwhm4 > fwhm0, "Fock-4 band " + detail::num(fwhm4) +
                                     " not wider than Fock-0 band " + detail::num(fwhm0));

    // Emission.
    detail::write_xy_csv(out_dir + "/fig2_critical.csv", "delta,value",
                         {crit_sweep.detuning, crit_sweep.value});
    detail::write_xy_csv(out_dir + "/fig2_avg_ground.csv", "delta,value",
                         {avg_ground.detuning, avg_ground.value});
    detail::write_xy_csv(out_dir + "/fig2_avg_squeezed.csv", "delta,value",
                         {avg_squeezed.detuning, avg_squeezed.value});
    detail::write_xy_csv(out_dir + "/fig2_pm_n0.csv", "delta,value",
                         {pm_grid, pm0});
    detail::write_xy_csv(out_dir + "/fig2_pm_n4.csv", "delta,value",
                         {pm_grid, pm4});
    {
        std::vector<double> cfi0, qfi0;
        for (const auto& cyc : cycles0) {
            cfi0.push_back(cyc.classical_fi_per_time);
            qfi0.push_back(cyc.qfi_per_time);
        }
        detail::write_xy_csv(out_dir + "/fig2_cycle_n0.csv",
                             "t1,classical_fi_per_time,qfi_per_time", {t1_grid0, cfi0, qfi0});
        std::vector<double> cfi4, qfi4;
        for (const auto& cyc : cycles4) {
            cfi4.push_back(cyc.classical_fi_per_time);
            qfi4.push_back(cyc.qfi_per_time);
        }
        detail::write_xy_csv(out_dir + "/fig2_cycle_n4.csv",
                             "t1,classical_fi_per_time,qfi_per_time", {t1_grid4, cfi4, qfi4});
    }

    {
        auto series = detail::sweep_series({{"critical coupling rate", &crit_sweep},
                                            {"ground F(t1)/t1", &avg_ground},
                                            {"squeezed F(t1)/t1", &avg_squeezed}});
        // Qualitative reference: a Lorentzian with the measured peak and width.
        SvgSeries lorentz;
        lorentz.label = "lorentzian reference";
        lorentz.color = "#999999";
        lorentz.dashed = true;
        for (double d : crit_sweep.detuning) {
            const double u = 2.0 * d / crit_sweep.fwhm;
            lorentz.points.push_back({d, crit_sweep.peak_value / (1.0 + u * u)});
        }
        series.push_back(std::move(lorentz));
        SvgOptions opt;
        opt.title = "Detuning response";
        opt.x_label = "detuning";
        opt.y_label = "information rate";
        write_svg(series, opt, out_dir + "/fig2_left.svg");
    }
    {
        std::vector<SvgSeries> series(2);
        series[0].label = "Fock-0, t1 = " + detail::num(t1_star0);
        series[0].color = "#1f2d3d";
        series[1].label = "Fock-4, t1 = " + detail::num(t1_star4);
        series[1].color = "#c0392b";
        series[1].dashed = true;
        for (std::size_t i = 0; i < pm_grid.size(); ++i) {
            series[0].points.push_back({pm_grid[i], pm0[i]});
            series[1].points.push_back({pm_grid[i], pm4[i]});
        }
        SvgOptions opt;
        opt.title = "Cycle information per time";
        opt.x_label = "detuning";
        opt.y_label = "classical FI / t1";
        write_svg(series, opt, out_dir + "/fig2_right.svg");
    }

    log << "critical peak " << crit_sweep.peak_value << " (fwhm " << crit_sweep.fwhm
        << "), per-time sweeps at target " << avg_ground.target_rate << ": cycles "
        << avg_ground.t1_cycle << " vs " << avg_squeezed.t1_cycle << ", fwhm " << avg_ground.fwhm
        << " vs " << avg_squeezed.fwhm << "; counting cycles " << t1_star0 << " vs " << t1_star4
        << " (fwhm " << fwhm0 << " vs " << fwhm4 << ")\n";
    log << "fig2 panels written to " << out_dir << "\n";
}

}  // namespace qfigrow
