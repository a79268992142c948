#include "latflow/exact.hpp"

#include <algorithm>

namespace latflow {

Int binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        r *= Int(n - i);
        r /= Int(i + 1);
    }
    return r;
}

std::vector<std::vector<std::size_t>> k_subsets(std::size_t m, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > m) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        // advance to the next subset in lex order
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == m - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

Int bareiss_determinant(IntMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (m(c, c) == 0) {
            std::size_t p = c + 1;
            while (p < n && m(p, c) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r)
            for (std::size_t j = c + 1; j < n; ++j) {
                Int v = m(r, j) * m(c, c) - m(r, c) * m(c, j);
                m(r, j) = v / prev;  // divides exactly in Bareiss
            }
        prev = m(c, c);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

Rational rational_determinant(RationalMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = m.rows;
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            Rational f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

namespace {

template <typename Field>
std::size_t field_rank(MatrixT<Field> m) {
    std::size_t rk = 0;
    for (std::size_t c = 0; c < m.cols && rk < m.rows; ++c) {
        std::size_t p = rk;
        while (p < m.rows && m(p, c) == Field(0)) ++p;
        if (p == m.rows) continue;
        if (p != rk)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(rk, j));
        for (std::size_t r = rk + 1; r < m.rows; ++r) {
            if (m(r, c) == Field(0)) continue;
            Field f = m(r, c) / m(rk, c);
            for (std::size_t j = c; j < m.cols; ++j) m(r, j) = m(r, j) - f * m(rk, j);
        }
        ++rk;
    }
    return rk;
}

}  // namespace

std::size_t rank(RationalMatrix m) { return field_rank(std::move(m)); }
std::size_t rank(MatrixT<GaussianRational> m) { return field_rank(std::move(m)); }

IntMatrix hermite_normal_form(IntMatrix m) {
    std::size_t rows = m.rows, cols = m.cols;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        // clear column c below pivot_row by gcd steps
        while (true) {
            std::size_t p = rows;
            for (std::size_t r = pivot_row; r < rows; ++r)
                if (m(r, c) != 0 && (p == rows || abs(m(r, c)) < abs(m(p, c)))) p = r;
            if (p == rows) break;  // column is zero from pivot_row down
            if (p != pivot_row)
                for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(pivot_row, j));
            bool cleared = true;
            for (std::size_t r = pivot_row + 1; r < rows; ++r) {
                if (m(r, c) == 0) continue;
                Int q = m(r, c) / m(pivot_row, c);
                for (std::size_t j = 0; j < cols; ++j) m(r, j) -= q * m(pivot_row, j);
                if (m(r, c) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (m(pivot_row, c) == 0) continue;
        if (m(pivot_row, c) < 0)
            for (std::size_t j = 0; j < cols; ++j) m(pivot_row, j) = -m(pivot_row, j);
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t r = 0; r < pivot_row; ++r) {
            Int q = m(r, c) / m(pivot_row, c);
            if (m(r, c) - q * m(pivot_row, c) < 0) q -= 1;
            if (q != 0)
                for (std::size_t j = 0; j < cols; ++j) m(r, j) -= q * m(pivot_row, j);
        }
        ++pivot_row;
    }
    IntMatrix h(pivot_row, cols);
    for (std::size_t r = 0; r < pivot_row; ++r)
        for (std::size_t j = 0; j < cols; ++j) h(r, j) = m(r, j);
    return h;
}

std::vector<Int> maximal_minors(const IntMatrix& m) {
    std::size_t r = m.rows;
    auto subsets = k_subsets(m.cols, r);
    std::vector<Int> out;
    out.reserve(subsets.size());
    IntMatrix sub(r, r);
    for (const auto& cols : subsets) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) sub(i, j) = m(i, cols[j]);
        out.push_back(bareiss_determinant(sub));
    }
    return out;
}

}  // namespace latflow
