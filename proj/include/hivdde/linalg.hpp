#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace hivdde {

/// Dense square matrix of small fixed order, row-major.
template <typename T, std::size_t N>
struct SquareMatrix {
    std::array<T, N * N> a{};

    T& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = T(1);
        return m;
    }

    T trace() const {
        T s{};
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
        SquareMatrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const T xik = x(i, k);
                for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }
};

/// Determinant by LU with partial pivoting. Works for real and complex T.
template <typename T, std::size_t N>
T determinant(SquareMatrix<T, N> m) {
    T det = T(1);
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        double best = std::abs(m(col, col));
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(m(r, col)) > best) {
                best = std::abs(m(r, col));
                piv = r;
            }
        }
        if (best == 0.0) return T(0);
        if (piv != col) {
            for (std::size_t j = 0; j < N; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < N; ++r) {
            const T f = m(r, col) / m(col, col);
            for (std::size_t j = col; j < N; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

using Mat5 = SquareMatrix<double, 5>;
using CMat5 = SquareMatrix<std::complex<double>, 5>;

}  // namespace hivdde
