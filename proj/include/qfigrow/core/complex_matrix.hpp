// complex_matrix.hpp - dense complex matrices and the operator algebra used everywhere else.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfigrow {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Dense row-major complex matrix. Everything in this toolkit is desk-scale
// (dim <= ~100), so a flat vector with simple loops is the whole story.
class Cmat {
  public:
    Cmat() = default;
    Cmat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Cmat zero(std::size_t n) { return Cmat(n, n); }
    static Cmat identity(std::size_t n) {
        Cmat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    Cmat& operator+=(const Cmat& o) {
        check_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Cmat& operator-=(const Cmat& o) {
        check_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Cmat& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Cmat operator+(Cmat a, const Cmat& b) { return a += b; }
    friend Cmat operator-(Cmat a, const Cmat& b) { return a -= b; }
    friend Cmat operator*(cplx s, Cmat a) { return a *= s; }
    friend Cmat operator*(Cmat a, cplx s) { return a *= s; }

    friend Cmat operator*(const Cmat& a, const Cmat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Cmat multiply: inner dimensions differ");
        Cmat c(a.rows_, b.cols_);
        // i-k-j order keeps the inner loop contiguous in both b and c.
        for (std::size_t i = 0; i < a.rows_; ++i) {
            const cplx* arow = a.data_.data() + i * a.cols_;
            cplx* crow = c.data_.data() + i * b.cols_;
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = arow[k];
                if (aik == cplx{}) continue;
                const cplx* brow = b.data_.data() + k * b.cols_;
                for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
            }
        }
        return c;
    }

    Cmat adjoint() const {
        Cmat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const {
        require_square("trace");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    void require_square(const char* what) const {
        if (!square()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }

  private:
    void check_same_shape(const Cmat& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

inline Cmat commutator(const Cmat& a, const Cmat& b) { return a * b - b * a; }
inline Cmat anticommutator(const Cmat& a, const Cmat& b) { return a * b + b * a; }

// tr(A^dag B), the trace inner product; conjugate-symmetric in its arguments.
inline cplx trace_inner_product(const Cmat& a, const Cmat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_inner_product: shape mismatch");
    cplx s = 0.0;
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t k = 0; k < n; ++k) s += std::conj(pa[k]) * pb[k];
    return s;
}

inline Cmat hermitize(const Cmat& a) {
    a.require_square("hermitize");
    Cmat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return r;
}

inline double hermiticity_defect(const Cmat& a) {
    a.require_square("hermiticity_defect");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s);
}

inline bool is_hermitian(const Cmat& a, double rel_tol = 1e-12) {
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    return hermiticity_defect(a) <= rel_tol * scale;
}

inline void require_hermitian(const Cmat& a, const char* what, double rel_tol = 1e-10) {
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const double defect = hermiticity_defect(a);
    if (defect > rel_tol * scale)
        throw std::invalid_argument(std::string(what) + ": matrix not Hermitian, defect norm " +
                                    std::to_string(defect) + " vs scale " + std::to_string(scale));
}

// Common 2x2 building blocks.
inline Cmat pauli_x() {
    Cmat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
inline Cmat pauli_y() {
    Cmat m(2, 2);
    m(0, 1) = cplx{0.0, -1.0};
    m(1, 0) = cplx{0.0, 1.0};
    return m;
}
inline Cmat pauli_z() {
    Cmat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

}  // namespace qfigrow
