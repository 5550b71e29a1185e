// propagate.hpp - fixed-step RK4 integration of (rho, rho') and the finite-difference oracle.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/complex_matrix.hpp"
#include "../core/density.hpp"
#include "../core/hermitian_eig.hpp"
#include "lindblad.hpp"
#include "model.hpp"

namespace qfigrow {

namespace detail {

inline void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("propagate: empty time grid");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i + 1] > t_grid[i]))
            throw std::invalid_argument("propagate: time grid must be strictly increasing");
}

// Roundoff-scale cleanup: restore exact unit trace and exact tracelessness.
inline void renormalize_pair(Cmat& rho, Cmat& rho_prime) {
    const double tr = rho.trace().real();
    if (tr > 0.0) rho *= cplx{1.0 / tr, 0.0};
    const cplx trp = rho_prime.trace();
    const double n = static_cast<double>(rho_prime.rows());
    for (std::size_t i = 0; i < rho_prime.rows(); ++i) rho_prime(i, i) -= trp / n;
}

inline void check_point(const ParamModel& model, const IntegratorConfig& config, double t,
                        const Cmat& rho) {
    if (!rho.all_finite())
        throw std::runtime_error("propagate: non-finite state at t = " + std::to_string(t));
    if (model.monitor_top_levels && model.dim >= 2) {
        const double top = rho(model.dim - 1, model.dim - 1).real() +
                           rho(model.dim - 2, model.dim - 2).real();
        if (top >= config.leakage_tol)
            throw std::runtime_error("propagate: truncation leakage " + std::to_string(top) +
                                     " at t = " + std::to_string(t) + ", increase the cutoff");
    }
    if (config.check_positivity) {
        const double lo = min_eigenvalue(rho);
        if (lo < -config.positivity_tol)
            throw std::runtime_error("propagate: positivity violated (eigenvalue " +
                                     std::to_string(lo) + " at t = " + std::to_string(t) +
                                     "), refine the step");
    }
}

template <typename Rhs>
inline void rk4_step(double t, double h, Cmat& rho, Cmat& rho_prime, Rhs&& rhs, bool with_prime,
                     bool hermitize_after) {
    Cmat k1r, k1p, k2r, k2p, k3r, k3p, k4r, k4p;
    rhs(t, rho, rho_prime, k1r, k1p);
    {
        Cmat r = rho + k1r * cplx{0.5 * h, 0.0};
        Cmat p = with_prime ? rho_prime + k1p * cplx{0.5 * h, 0.0} : Cmat();
        rhs(t + 0.5 * h, r, p, k2r, k2p);
    }
    {
        Cmat r = rho + k2r * cplx{0.5 * h, 0.0};
        Cmat p = with_prime ? rho_prime + k2p * cplx{0.5 * h, 0.0} : Cmat();
        rhs(t + 0.5 * h, r, p, k3r, k3p);
    }
    {
        Cmat r = rho + k3r * cplx{h, 0.0};
        Cmat p = with_prime ? rho_prime + k3p * cplx{h, 0.0} : Cmat();
        rhs(t + h, r, p, k4r, k4p);
    }
    const cplx w = cplx{h / 6.0, 0.0};
    rho += (k1r + cplx{2.0, 0.0} * k2r + cplx{2.0, 0.0} * k3r + k4r) * w;
    if (with_prime)
        rho_prime += (k1p + cplx{2.0, 0.0} * k2p + cplx{2.0, 0.0} * k3p + k4p) * w;
    if (hermitize_after) {
        rho = hermitize(rho);
        if (with_prime) rho_prime = hermitize(rho_prime);
    }
}

}  // namespace detail

// Joint RK4 propagation of (rho, rho') over t_grid; the first grid point is the
// initial time and is emitted unmodified.
inline std::vector<TrajectoryPoint> propagate(const ParamModel& model, const Cmat& rho0,
                                              const Cmat& rho_prime0, double g,
                                              const std::vector<double>& t_grid,
                                              const IntegratorConfig& config = {}) {
    model.validate();
    config.validate();
    detail::check_grid(t_grid);
    check_density(rho0);
    require_hermitian(rho_prime0, "propagate: rho_prime0");
    if (rho0.rows() != model.dim) throw std::invalid_argument("propagate: dimension mismatch");

    // For autonomous models the operator set is frozen once.
    detail::OpSet frozen;
    if (!model.time_dependent) frozen = detail::OpSet::at(model, t_grid.front(), g);
    auto rhs = [&](double t, const Cmat& r, const Cmat& p, Cmat& out_r, Cmat& out_p) {
        if (model.time_dependent) {
            const auto ops = detail::OpSet::at(model, t, g);
            out_r = detail::rho_rhs(ops, r);
            out_p = detail::rho_prime_rhs(ops, r, p);
        } else {
            out_r = detail::rho_rhs(frozen, r);
            out_p = detail::rho_prime_rhs(frozen, r, p);
        }
    };

    const double h_target = config.step / static_cast<double>(config.substep_refinement);
    Cmat rho = hermitize(rho0);
    Cmat rho_prime = hermitize(rho_prime0);

    std::vector<TrajectoryPoint> out;
    out.reserve(t_grid.size());
    detail::check_point(model, config, t_grid.front(), rho);
    out.push_back({t_grid.front(), rho, rho_prime});

    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double span = t_grid[i + 1] - t_grid[i];
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / h_target - 1e-12)));
        const double h = span / nsub;
        for (int k = 0; k < nsub; ++k)
            detail::rk4_step(t_grid[i] + k * h, h, rho, rho_prime, rhs, true,
                             config.hermitize_each_step);
        detail::renormalize_pair(rho, rho_prime);
        detail::check_point(model, config, t_grid[i + 1], rho);
        out.push_back({t_grid[i + 1], rho, rho_prime});
    }
    return out;
}

// Independent rho-only propagation used by the finite-difference oracle below.
inline std::vector<Cmat> propagate_rho_only(const ParamModel& model, const Cmat& rho0, double g,
                                            const std::vector<double>& t_grid,
                                            const IntegratorConfig& config = {}) {
    model.validate();
    config.validate();
    detail::check_grid(t_grid);
    check_density(rho0);

    detail::OpSet frozen;
    if (!model.time_dependent) frozen = detail::OpSet::at(model, t_grid.front(), g);
    auto rhs = [&](double t, const Cmat& r, const Cmat&, Cmat& out_r, Cmat& out_p) {
        if (model.time_dependent)
            out_r = detail::rho_rhs(detail::OpSet::at(model, t, g), r);
        else
            out_r = detail::rho_rhs(frozen, r);
        out_p = Cmat();
    };

    const double h_target = config.step / static_cast<double>(config.substep_refinement);
    Cmat rho = hermitize(rho0);
    Cmat unused;
    std::vector<Cmat> out;
    out.reserve(t_grid.size());
    out.push_back(rho);
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double span = t_grid[i + 1] - t_grid[i];
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / h_target - 1e-12)));
        const double h = span / nsub;
        for (int k = 0; k < nsub; ++k)
            detail::rk4_step(t_grid[i] + k * h, h, rho, unused, rhs, false,
                             config.hermitize_each_step);
        const double tr = rho.trace().real();
        if (tr > 0.0) rho *= cplx{1.0 / tr, 0.0};
        detail::check_point(model, config, t_grid[i + 1], rho);
        out.push_back(rho);
    }
    return out;
}

// Central-difference oracle for rho': [rho(t, g+d) - rho(t, g-d)] / (2d).
inline std::vector<Cmat> fd_rho_prime(const ParamModel& model, const Cmat& rho0, double g,
                                      double delta_g, const std::vector<double>& t_grid,
                                      const IntegratorConfig& config = {}) {
    if (delta_g <= 0.0) throw std::invalid_argument("fd_rho_prime: delta_g must be positive");
    const auto plus = propagate_rho_only(model, rho0, g + delta_g, t_grid, config);
    const auto minus = propagate_rho_only(model, rho0, g - delta_g, t_grid, config);
    std::vector<Cmat> out;
    out.reserve(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) {
        Cmat d = plus[i] - minus[i];
        d *= cplx{0.5 / delta_g, 0.0};
        out.push_back(hermitize(d));
    }
    return out;
}

inline double default_fd_delta(double g) { return 1e-4 * std::max(1.0, std::abs(g)); }

}  // namespace qfigrow
