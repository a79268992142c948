#pragma once
// Small dense floating-point linear algebra used by the flow and orbit code.
// Matrices are row-major, sizes stay below ~70x70 (exterior powers of the
// ambient space), so simple O(n^3) routines are fine.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace latflow {

template <typename T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
};

using MatD = Mat<double>;
using MatC = Mat<std::complex<double>>;

template <typename T>
Mat<T> matmul(const Mat<T>& x, const Mat<T>& y) {
    Mat<T> z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            T v = x(i, k);
            if (v == T(0)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

template <typename T>
std::vector<T> matvec(const Mat<T>& m, const std::vector<T>& v) {
    std::vector<T> out(m.rows, T(0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
    return out;
}

// Determinant by partial-pivot Gaussian elimination. Good enough for the
// modest sizes here; exact paths use bareiss_determinant instead.
template <typename T>
T gauss_determinant(Mat<T> m) {
    using std::abs;
    T det = T(1);
    for (std::size_t c = 0; c < m.cols; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < m.rows; ++r)
            if (abs(m(r, c)) > abs(m(p, c))) p = r;
        if (m(p, c) == T(0)) return T(0);
        if (p != c) {
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < m.rows; ++r) {
            T f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < m.cols; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

inline double norm_sup(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace latflow
