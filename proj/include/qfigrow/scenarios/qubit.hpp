// qubit.hpp - dephasing-qubit models and the noise-derivative demonstrations.

#pragma once

#include <cmath>
#include <stdexcept>

#include "../core/complex_matrix.hpp"
#include "../dynamics/model.hpp"
#include "../fisher/rates.hpp"

namespace qfigrow {

// H = g epsilon sigma_z with dephasing channel sqrt(gamma_d) sigma_z.
inline ParamModel dephasing_qubit(double epsilon, double gamma_d) {
    if (gamma_d < 0.0) throw std::invalid_argument("dephasing_qubit: negative damping");
    ParamModel m;
    m.dim = 2;
    m.hamiltonian = [epsilon](double, double g) {
        Cmat h = pauli_z();
        h *= cplx{g * epsilon, 0.0};
        return h;
    };
    m.hamiltonian_deriv = [epsilon](double, double) {
        Cmat h = pauli_z();
        h *= cplx{epsilon, 0.0};
        return h;
    };
    if (gamma_d > 0.0) {
        const double root = std::sqrt(gamma_d);
        m.lindblads.push_back([root](double, double) {
            Cmat l = pauli_z();
            l *= cplx{root, 0.0};
            return l;
        });
    }
    return m;
}

// Dephasing whose axis rotates with g: L(g) = sqrt(gamma) (cos g sigma_z + sin g sigma_y).
inline ParamModel dephasing_direction_qubit(double epsilon, double gamma_d) {
    if (gamma_d < 0.0) throw std::invalid_argument("dephasing_direction_qubit: negative damping");
    ParamModel m;
    m.dim = 2;
    m.hamiltonian = [epsilon](double, double g) {
        Cmat h = pauli_z();
        h *= cplx{g * epsilon, 0.0};
        return h;
    };
    m.hamiltonian_deriv = [epsilon](double, double) {
        Cmat h = pauli_z();
        h *= cplx{epsilon, 0.0};
        return h;
    };
    const double root = std::sqrt(gamma_d);
    m.lindblads.push_back([root](double, double g) {
        Cmat l = pauli_z();
        l *= cplx{root * std::cos(g), 0.0};
        Cmat y = pauli_y();
        y *= cplx{root * std::sin(g), 0.0};
        return l + y;
    });
    m.lindblad_derivs.push_back([root](double, double g) {
        Cmat l = pauli_z();
        l *= cplx{-root * std::sin(g), 0.0};
        Cmat y = pauli_y();
        y *= cplx{root * std::cos(g), 0.0};
        return l + y;
    });
    return m;
}

// Dephasing whose magnitude depends on g: L(g) = (1 + f_slope g) sqrt(gamma) sigma_z.
inline ParamModel dephasing_magnitude_qubit(double epsilon, double gamma_d, double f_slope) {
    if (gamma_d < 0.0) throw std::invalid_argument("dephasing_magnitude_qubit: negative damping");
    ParamModel m;
    m.dim = 2;
    m.hamiltonian = [epsilon](double, double g) {
        Cmat h = pauli_z();
        h *= cplx{g * epsilon, 0.0};
        return h;
    };
    m.hamiltonian_deriv = [epsilon](double, double) {
        Cmat h = pauli_z();
        h *= cplx{epsilon, 0.0};
        return h;
    };
    const double root = std::sqrt(gamma_d);
    m.lindblads.push_back([root, f_slope](double, double g) {
        Cmat l = pauli_z();
        l *= cplx{root * (1.0 + f_slope * g), 0.0};
        return l;
    });
    m.lindblad_derivs.push_back([root, f_slope](double, double) {
        Cmat l = pauli_z();
        l *= cplx{root * f_slope, 0.0};
        return l;
    });
    return m;
}

// Growth rate when the SLD is forced to alpha I + beta sigma_z on the
// axis-rotation model at g = 0: the exact rate formula gives
// 2 beta (i tr(rho [H', sigma_z]) + 2 gamma <sigma_y>), which is unbounded in
// beta whenever <sigma_y> is nonzero. H' = 0 in this demonstration.
inline double dephasing_direction_demo(double gamma_d, const Cmat& rho, double lambda_scale) {
    if (rho.rows() != 2) throw std::invalid_argument("dephasing_direction_demo: qubit state expected");
    const ParamModel m = dephasing_direction_qubit(0.0, gamma_d);
    SLD sld;
    sld.operator_matrix = pauli_z();
    sld.operator_matrix *= cplx{lambda_scale, 0.0};
    return qfi_rate(rho, sld, m, 0.0, 0.0);
}

// Closed-form QFI of the dephasing qubit started in |+><+| at g = 0:
// F(t) = 4 epsilon^2 t^2 e^{-4 gamma t}.
inline double dephasing_qubit_qfi(double epsilon, double gamma_d, double t) {
    return 4.0 * epsilon * epsilon * t * t * std::exp(-4.0 * gamma_d * t);
}

inline Cmat plus_state_density() {
    Cmat rho(2, 2);
    rho(0, 0) = 0.5;
    rho(0, 1) = 0.5;
    rho(1, 0) = 0.5;
    rho(1, 1) = 0.5;
    return rho;
}

}  // namespace qfigrow
