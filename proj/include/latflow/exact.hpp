#pragma once
// Exact arithmetic: arbitrary-precision integers and rationals, Gaussian
// rationals, and the exact linear algebra built on top of them (Bareiss
// determinants, rank, Hermite normal form, minors).

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latflow {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int gcd_int(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

// Complex number with rational real and imaginary parts. Enough field
// structure for exact rank computations over Q(i).
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("division by zero GaussianRational");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational conj() const { return {re, -im}; }
    // |z|^2 as a rational
    Rational norm() const { return re * re + im * im; }
};

// Dense matrices stored row-major. Kept deliberately small and concrete:
// everything in this project is at most a few dozen rows.
template <typename T>
struct MatrixT {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    MatrixT() = default;
    MatrixT(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static MatrixT identity(std::size_t n) {
        MatrixT m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    friend bool operator==(const MatrixT& x, const MatrixT& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

using IntMatrix = MatrixT<Int>;
using RationalMatrix = MatrixT<Rational>;

// Fraction-free Bareiss elimination. Exact for integer input, no blowup in
// intermediate denominators.
Int bareiss_determinant(IntMatrix m);

Rational rational_determinant(RationalMatrix m);

// Row rank by fraction-free elimination over the given field.
std::size_t rank(RationalMatrix m);
std::size_t rank(MatrixT<GaussianRational> m);

// Row-style Hermite normal form of an integer matrix (full row rank not
// required). Returns H with the same row span as the input, rows ordered so
// pivots move right, zero rows dropped.
IntMatrix hermite_normal_form(IntMatrix m);

// All r x r minors of an r x m matrix (r <= m), in lexicographic order of the
// chosen column subsets.
std::vector<Int> maximal_minors(const IntMatrix& m);

// Lexicographically ordered k-subsets of {0,...,m-1}.
std::vector<std::vector<std::size_t>> k_subsets(std::size_t m, std::size_t k);

Int binomial(std::size_t n, std::size_t k);

}  // namespace latflow
