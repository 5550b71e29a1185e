// random_gen.hpp - seeded generators for property-test inputs.

#pragma once

#include <cstdint>
#include <random>

#include "complex_matrix.hpp"
#include "density.hpp"

namespace qfigrow {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double normal() { return normal_(eng_); }
    double uniform() { return uniform_(eng_); }
    cplx cnormal() { return cplx{normal(), normal()}; }

    Cmat gaussian_matrix(std::size_t rows, std::size_t cols) {
        Cmat m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = cnormal();
        return m;
    }

    Cmat hermitian(std::size_t n, double scale = 1.0) {
        Cmat b = gaussian_matrix(n, n);
        Cmat h = hermitize(b);
        h *= cplx{scale, 0.0};
        return h;
    }

    // Full-rank density matrix: normalized G G^dag with Gaussian G.
    Cmat density(std::size_t n, std::size_t rank = 0) {
        if (rank == 0 || rank > n) rank = n;
        Cmat g = gaussian_matrix(n, rank);
        Cmat rho = g * g.adjoint();
        const double tr = rho.trace().real();
        rho *= cplx{1.0 / tr, 0.0};
        return hermitize(rho);
    }

    Cmat state(std::size_t n) { return gaussian_matrix(n, 1); }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qfigrow
