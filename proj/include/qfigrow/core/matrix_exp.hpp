// matrix_exp.hpp - matrix exponential by scaling-and-squaring with a Taylor kernel.

#pragma once

#include <cmath>
#include <cstddef>

#include "complex_matrix.hpp"

namespace qfigrow {

namespace detail {

inline double inf_norm(const Cmat& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
        m = std::max(m, row);
    }
    return m;
}

}  // namespace detail

// exp(A). The argument is scaled until its norm is at most 1/2, the Taylor series
// is summed to machine precision there, and the result is squared back up.
inline Cmat matrix_exp(const Cmat& a) {
    a.require_square("matrix_exp");
    const std::size_t n = a.rows();

    const double norm = detail::inf_norm(a);
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.5) {
        scaled *= 0.5;
        ++squarings;
    }

    Cmat t = a;
    t *= std::ldexp(1.0, -squarings);

    Cmat result = Cmat::identity(n);
    Cmat term = Cmat::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * t;
        term *= cplx{1.0 / static_cast<double>(k), 0.0};
        result += term;
        if (term.max_abs() <= 1e-18 * std::max(result.max_abs(), 1.0)) break;
    }

    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

}  // namespace qfigrow
