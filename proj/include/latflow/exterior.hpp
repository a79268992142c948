#pragma once
// Exterior algebra over R^m. Multivectors are stored sparsely, keyed by
// sorted index subsets; keys compare lexicographically, which is also the
// basis order used when flattening to a dense coordinate vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <map>
#include <stdexcept>
#include <vector>

#include "latflow/linalg.hpp"

namespace latflow {

using IndexSet = std::vector<std::size_t>;

template <typename T>
struct Multivector {
    std::size_t ambient_dim = 0;
    std::size_t grade = 0;
    // set when a wedge exceeded the ambient dimension and collapsed to zero
    bool grade_overflow = false;
    std::map<IndexSet, T> coords;

    Multivector() = default;
    Multivector(std::size_t m, std::size_t k) : ambient_dim(m), grade(k) {
        if (k > m) throw std::invalid_argument("multivector grade exceeds ambient dimension");
    }

    static Multivector from_vector(const std::vector<T>& v) {
        Multivector w(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(v[i] == T(0))) w.coords[{i}] = v[i];
        return w;
    }

    bool is_zero() const {
        for (const auto& [k, c] : coords)
            if (!(c == T(0))) return false;
        return true;
    }

    void prune() {
        for (auto it = coords.begin(); it != coords.end();)
            it = (it->second == T(0)) ? coords.erase(it) : std::next(it);
    }

    T norm_squared() const {
        T s(0);
        for (const auto& [k, c] : coords) s += c * c;
        return s;
    }

    Multivector& operator*=(const T& s) {
        for (auto& [k, c] : coords) c *= s;
        return *this;
    }

    Multivector& operator+=(const Multivector& o) {
        if (ambient_dim != o.ambient_dim || grade != o.grade)
            throw std::invalid_argument("multivector shape mismatch in addition");
        for (const auto& [k, c] : o.coords) coords[k] += c;
        return *this;
    }

    friend bool operator==(const Multivector& a, const Multivector& b) {
        if (a.ambient_dim != b.ambient_dim || a.grade != b.grade) return false;
        Multivector d = a;
        for (const auto& [k, c] : b.coords) d.coords[k] -= c;
        return d.is_zero();
    }
};

inline double norm(const Multivector<double>& w) { return std::sqrt(w.norm_squared()); }

// Sign of concatenating two disjoint sorted subsets and resorting: parity of
// the number of pairs (i in a, j in b) with i > j.
inline int merge_sign(const IndexSet& a, const IndexSet& b) {
    std::size_t inversions = 0;
    for (std::size_t i : a)
        for (std::size_t j : b)
            if (i > j) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

template <typename T>
Multivector<T> wedge(const Multivector<T>& a, const Multivector<T>& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("wedge of multivectors in different ambient dimensions");
    std::size_t m = a.ambient_dim;
    if (a.grade + b.grade > m) {
        Multivector<T> zero(m, m);
        zero.grade_overflow = true;
        return zero;
    }
    Multivector<T> out(m, a.grade + b.grade);
    IndexSet key;
    key.reserve(a.grade + b.grade);
    for (const auto& [ka, ca] : a.coords) {
        for (const auto& [kb, cb] : b.coords) {
            // skip terms with a repeated index
            bool disjoint = true;
            for (std::size_t i : ka) {
                for (std::size_t j : kb)
                    if (i == j) {
                        disjoint = false;
                        break;
                    }
                if (!disjoint) break;
            }
            if (!disjoint) continue;
            key.clear();
            std::merge(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(key));
            T term = ca * cb;
            if (merge_sign(ka, kb) < 0) term = -term;
            out.coords[key] += term;
        }
    }
    out.prune();
    return out;
}

// Wedge of an ordered independent set of vectors, sign-canonicalized so the
// first nonzero coordinate (in key order) is positive. The subgroup spanned
// by the vectors determines this element up to sign, so canonicalizing makes
// it usable as a dedup key.
template <typename T>
Multivector<T> represent_subgroup(const std::vector<std::vector<T>>& basis) {
    if (basis.empty()) throw std::invalid_argument("represent_subgroup of empty basis");
    Multivector<T> w = Multivector<T>::from_vector(basis[0]);
    for (std::size_t i = 1; i < basis.size(); ++i)
        w = wedge(w, Multivector<T>::from_vector(basis[i]));
    if (w.is_zero()) throw std::invalid_argument("represent_subgroup: dependent input vectors");
    for (const auto& [k, c] : w.coords) {
        if (c == T(0)) continue;
        if (c < T(0))
            for (auto& [k2, c2] : w.coords) c2 = -c2;
        break;
    }
    return w;
}

// Action of the k-th exterior power of M. The image of a basis element e_S is
// the wedge of the columns of M indexed by S.
template <typename T>
Multivector<T> apply_exterior(const Mat<T>& M, const Multivector<T>& w) {
    if (M.rows != M.cols || M.rows != w.ambient_dim)
        throw std::invalid_argument("apply_exterior: matrix does not match ambient dimension");
    std::size_t m = w.ambient_dim;
    Multivector<T> out(m, w.grade);
    out.grade_overflow = w.grade_overflow;
    std::vector<T> col(m);
    for (const auto& [key, c] : w.coords) {
        if (c == T(0)) continue;
        Multivector<T> image;
        bool first = true;
        for (std::size_t s : key) {
            for (std::size_t r = 0; r < m; ++r) col[r] = M(r, s);
            auto v = Multivector<T>::from_vector(col);
            image = first ? v : wedge(image, v);
            first = false;
        }
        if (w.grade == 0) {
            out.coords[{}] += c;
            continue;
        }
        image *= c;
        out += image;
    }
    out.prune();
    return out;
}

}  // namespace latflow
