// random_model.hpp - seeded random model instances for the property suites.

#pragma once

#include "../core/random_gen.hpp"
#include "model.hpp"

namespace qfigrow {

// Constant-operator model with H(t,g) = H0 + g H1 and fixed noise channels.
// The parameter enters through the Hamiltonian only, which is the setting the
// growth-rate bounds are stated for.
inline ParamModel random_constant_model(Rng& rng, std::size_t dim, std::size_t n_channels,
                                        double noise_scale = 0.7) {
    ParamModel m;
    m.dim = dim;
    const Cmat h0 = rng.hermitian(dim, 0.8);
    const Cmat h1 = rng.hermitian(dim, 1.0);
    m.hamiltonian = [h0, h1](double, double g) { return h0 + h1 * cplx{g, 0.0}; };
    m.hamiltonian_deriv = [h1](double, double) { return h1; };
    for (std::size_t j = 0; j < n_channels; ++j) {
        Cmat l = rng.gaussian_matrix(dim, dim);
        l *= cplx{noise_scale / std::sqrt(static_cast<double>(dim)), 0.0};
        m.lindblads.push_back([l](double, double) { return l; });
    }
    return m;
}

}  // namespace qfigrow
