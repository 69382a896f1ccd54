#pragma once

#include "edgejump/numerics/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace edgejump {

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix<T> c(a.rows(), b.cols(), a(0, 0) * 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

namespace detail {

inline void eliminate(std::complex<double>& target, const std::complex<double>& f, const std::complex<double>& p) {
    target -= f * p;
}
inline void eliminate(double& target, double f, double p) { target -= f * p; }
inline void eliminate(BigComplex& target, const BigComplex& f, const BigComplex& p) {
    thread_local BigFloat tmp;
    if (tmp.bits() != target.bits()) tmp = BigFloat(target.ctx());
    BigComplex::sub_mul(target, f, p, tmp);
}
inline void eliminate(BigFloat& target, const BigFloat& f, const BigFloat& p) { target -= f * p; }

/// In-place LU with partial pivoting. Returns the permutation sign, or 0 when an
/// exactly zero pivot column is met (singular matrix).
template <class T>
int lu_factor(Matrix<T>& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.rows();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = scalar_traits<T>::log2_abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = scalar_traits<T>::log2_abs(a(i, k));
            if (m > best) { best = m; p = i; }
        }
        if (std::isinf(best) && best < 0) return 0;
        if (p != k) {
            a.swap_rows(p, k);
            std::swap(perm[p], perm[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const T f = a(i, k);
            for (std::size_t j = k + 1; j < n; ++j) eliminate(a(i, j), f, a(k, j));
        }
    }
    return sign;
}

}  // namespace detail

/// Determinant by LU with partial pivoting. A 0x0 matrix has determinant 1;
/// an exactly zero pivot column yields exact 0.
template <class T>
T lu_det(Matrix<T> m, const T& one) {
    if (!m.square()) throw std::invalid_argument("lu_det: matrix must be square");
    if (m.rows() == 0) return one;
    std::vector<std::size_t> perm;
    int sign = detail::lu_factor(m, perm);
    if (sign == 0) return one * 0.0;
    T det = m(0, 0);
    for (std::size_t i = 1; i < m.rows(); ++i) det *= m(i, i);
    if (sign < 0) det = -det;
    return det;
}

inline double lu_det(const Matrix<double>& m) { return lu_det(m, 1.0); }
inline std::complex<double> lu_det(const Matrix<std::complex<double>>& m) { return lu_det(m, std::complex<double>(1.0)); }
inline BigComplex lu_det(const Matrix<BigComplex>& m, PrecisionCtx ctx) { return lu_det(m, BigComplex(1.0, ctx)); }

/// Solves A x = b by pivoted LU. Throws on an exactly singular matrix.
template <class T>
std::vector<T> lu_solve(Matrix<T> a, std::vector<T> b) {
    if (!a.square() || a.rows() != b.size()) throw std::invalid_argument("lu_solve: shape mismatch");
    std::vector<std::size_t> perm;
    if (detail::lu_factor(a, perm) == 0) throw std::domain_error("lu_solve: singular matrix");
    const std::size_t n = a.rows();
    std::vector<T> x;
    x.reserve(n);
    for (std::size_t i = 0; i < n; ++i) x.push_back(b[perm[i]]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) detail::eliminate(x[i], a(i, j), x[j]);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) detail::eliminate(x[i], a(i, j), x[j]);
        x[i] /= a(i, i);
    }
    return x;
}

}  // namespace edgejump
