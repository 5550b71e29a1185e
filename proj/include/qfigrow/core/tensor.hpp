// tensor.hpp - Kronecker products and partial traces for two-mode scenarios.

#pragma once

#include <stdexcept>

#include "complex_matrix.hpp"

namespace qfigrow {

inline Cmat kron(const Cmat& a, const Cmat& b) {
    Cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

// Trace out the second factor of a (dim_a * dim_b) square matrix.
inline Cmat partial_trace_second(const Cmat& m, std::size_t dim_a, std::size_t dim_b) {
    if (m.rows() != dim_a * dim_b || !m.square())
        throw std::invalid_argument("partial_trace_second: shape mismatch");
    Cmat out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_a; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < dim_b; ++k) s += m(i * dim_b + k, j * dim_b + k);
            out(i, j) = s;
        }
    return out;
}

// Trace out the first factor of a (dim_a * dim_b) square matrix.
inline Cmat partial_trace_first(const Cmat& m, std::size_t dim_a, std::size_t dim_b) {
    if (m.rows() != dim_a * dim_b || !m.square())
        throw std::invalid_argument("partial_trace_first: shape mismatch");
    Cmat out(dim_b, dim_b);
    for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < dim_a; ++i) s += m(i * dim_b + k, i * dim_b + l);
            out(k, l) = s;
        }
    return out;
}

}  // namespace qfigrow
