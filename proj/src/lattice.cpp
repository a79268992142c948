#include "latflow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "latflow/bigfloat.hpp"
#include "latflow/exterior.hpp"

namespace latflow {

namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

double round_half(double x) { return std::nearbyint(x); }
BigFloat round_half(const BigFloat& x) { return boost::multiprecision::round(x); }

double to_dbl(double x) { return x; }
double to_dbl(const BigFloat& x) { return x.convert_to<double>(); }

double sqrt_f(double x) { return std::sqrt(x); }
BigFloat sqrt_f(const BigFloat& x) { return boost::multiprecision::sqrt(x); }

template <typename F>
F dot_f(const std::vector<F>& a, const std::vector<F>& b) {
    F s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <typename F>
F sup_f(const std::vector<F>& a) {
    using std::abs;
    F s(0);
    for (const F& v : a) {
        F av = abs(v);
        if (av > s) s = av;
    }
    return s;
}

template <typename F>
struct Gso {
    std::vector<std::vector<F>> mu;  // lower triangular
    std::vector<F> B;                // squared norms of the orthogonalized rows
};

template <typename F>
Gso<F> gram_schmidt(const std::vector<std::vector<F>>& b) {
    std::size_t k = b.size();
    std::vector<std::vector<F>> star = b;
    Gso<F> g;
    g.mu.assign(k, std::vector<F>(k, F(0)));
    g.B.assign(k, F(0));
    for (std::size_t i = 0; i < k; ++i) {
        star[i] = b[i];
        for (std::size_t j = 0; j < i; ++j) {
            if (g.B[j] == F(0)) throw std::invalid_argument("dependent rows in basis");
            g.mu[i][j] = dot_f(b[i], star[j]) / g.B[j];
            for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= g.mu[i][j] * star[j][c];
        }
        g.B[i] = dot_f(star[i], star[i]);
        if (g.B[i] == F(0)) throw std::invalid_argument("dependent rows in basis");
    }
    return g;
}

// LLL with delta 0.99. GSO is recomputed after every change, which is cheap
// at these sizes and avoids incremental-update bookkeeping bugs. An optional
// mirror of exact integer rows receives the same row operations, so integer
// lattices stay exact through reduction.
template <typename F>
void lll_rows(std::vector<std::vector<F>>& b, std::vector<std::vector<Int>>* mirror) {
    std::size_t k = b.size();
    if (k <= 1) return;
    const F lovasz = F(0.99);
    Gso<F> gso = gram_schmidt(b);
    std::size_t i = 1, steps = 0, cap = 4000 * k;
    while (i < k) {
        // a stuck floating reduction is harmless: enumeration radii are taken
        // from the rows we end up with, so correctness is preserved
        if (++steps > cap) break;
        bool changed = false;
        for (std::size_t j = i; j-- > 0;) {
            F qf = round_half(gso.mu[i][j]);
            if (qf != F(0)) {
                for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] -= qf * b[j][c];
                if (mirror) {
                    Int q = (long long)std::llround(to_dbl(qf));
                    for (std::size_t c = 0; c < b[i].size(); ++c)
                        (*mirror)[i][c] -= q * (*mirror)[j][c];
                }
                changed = true;
            }
        }
        if (changed) gso = gram_schmidt(b);
        if (gso.B[i] < (lovasz - gso.mu[i][i - 1] * gso.mu[i][i - 1]) * gso.B[i - 1]) {
            std::swap(b[i], b[i - 1]);
            if (mirror) std::swap((*mirror)[i], (*mirror)[i - 1]);
            gso = gram_schmidt(b);
            if (i > 1) --i;
        } else {
            ++i;
        }
    }
}

// Visits every nonzero coefficient vector (up to global sign: the highest
// nonzero coordinate is positive) whose lattice vector has squared Euclidean
// norm <= radius2 under the given orthogonalization.
template <typename F, typename Visit>
void enumerate_in_radius(const Gso<F>& gso, const F& radius2, Visit visit) {
    std::size_t k = gso.B.size();
    std::vector<long long> x(k, 0);
    std::vector<F> partial(k + 1, F(0));

    auto rec = [&](auto&& self, std::size_t lvl, bool tail_is_zero) -> void {
        F c(0);
        for (std::size_t j = lvl + 1; j < k; ++j)
            if (x[j] != 0) c += F(x[j]) * gso.mu[j][lvl];
        F rem = radius2 - partial[lvl + 1];
        if (rem < F(0)) return;
        F half = sqrt_f(rem / gso.B[lvl]);
        long long lo = (long long)std::ceil(to_dbl(-c - half) - 1e-12);
        long long hi = (long long)std::floor(to_dbl(-c + half) + 1e-12);
        if (tail_is_zero && lo < 0) lo = 0;  // sign canonicalization
        for (long long v = lo; v <= hi; ++v) {
            F off = F(v) + c;
            partial[lvl] = partial[lvl + 1] + off * off * gso.B[lvl];
            if (partial[lvl] > radius2) continue;
            x[lvl] = v;
            bool tz = tail_is_zero && v == 0;
            if (lvl == 0) {
                if (!tz) visit(x);
            } else {
                self(self, lvl - 1, tz);
            }
        }
        x[lvl] = 0;
    };
    rec(rec, k - 1, true);
}

std::vector<std::vector<double>> rows_to_double(const std::vector<std::vector<Int>>& rows) {
    std::vector<std::vector<double>> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i].resize(rows[i].size());
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            out[i][j] = rows[i][j].convert_to<double>();
    }
    return out;
}

// Reduce exact rows (via a mirrored floating reduction), then hand back both
// the reduced integer rows and a fresh GSO of their double images.
struct ReducedExact {
    std::vector<std::vector<Int>> rows;
    Gso<double> gso;
};

ReducedExact reduce_exact(std::vector<std::vector<Int>> rows) {
    auto frows = rows_to_double(rows);
    lll_rows<double>(frows, &rows);
    frows = rows_to_double(rows);  // drop any floating drift before the GSO
    return {std::move(rows), gram_schmidt(frows)};
}

Int gcd_all(const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& e : v) g = gcd_int(g, e);
    return g;
}

void canonicalize_sign(std::vector<Int>& v) {
    for (const Int& e : v) {
        if (e == 0) continue;
        if (e < 0)
            for (Int& x : v) x = -x;
        break;
    }
}

}  // namespace

LatticeBasis LatticeBasis::from_int_rows(std::vector<std::vector<Int>> rows) {
    if (rows.empty()) throw std::invalid_argument("lattice basis needs at least one generator");
    LatticeBasis L;
    L.ambient_dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != L.ambient_dim) throw std::invalid_argument("ragged generator rows");
    L.exact = true;
    L.igen = std::move(rows);
    return L;
}

LatticeBasis LatticeBasis::from_rational_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) throw std::invalid_argument("lattice basis needs at least one generator");
    Int den = 1;
    for (const auto& r : rows)
        for (const auto& e : r) den = den / gcd_int(den, denominator(e)) * denominator(e);
    std::vector<std::vector<Int>> irows(rows.size());
    Int num_gcd = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        irows[i].resize(rows[i].size());
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            irows[i][j] = numerator(rows[i][j]) * (den / denominator(rows[i][j]));
            num_gcd = gcd_int(num_gcd, irows[i][j]);
        }
    }
    if (num_gcd == 0) throw std::invalid_argument("zero basis");
    for (auto& r : irows)
        for (auto& e : r) e /= num_gcd;
    LatticeBasis L = from_int_rows(std::move(irows));
    L.scale = Rational(num_gcd, den);
    return L;
}

LatticeBasis LatticeBasis::from_double_rows(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw std::invalid_argument("lattice basis needs at least one generator");
    LatticeBasis L;
    L.ambient_dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != L.ambient_dim) throw std::invalid_argument("ragged generator rows");
    L.exact = false;
    L.fgen = std::move(rows);
    return L;
}

std::vector<std::vector<double>> LatticeBasis::rows_as_double() const {
    if (!exact) return fgen;
    auto out = rows_to_double(igen);
    double s = to_double(scale);
    for (auto& r : out)
        for (auto& e : r) e *= s;
    return out;
}

Int min_sup_exact(const std::vector<std::vector<Int>>& rows) {
    if (rows.empty()) throw std::invalid_argument("rank-0 lattice has no shortest vector");
    auto red = reduce_exact(rows);
    Int best = 0;
    for (const auto& r : red.rows) {
        Int s = 0;
        for (const Int& e : r)
            if (abs(e) > s) s = abs(e);
        if (best == 0 || s < best) best = s;
    }
    // every vector with sup norm <= best has squared Euclidean norm <= m*best^2
    double radius2 =
        (best * best * Int(rows[0].size())).convert_to<double>() * (1.0 + 1e-6) + 1e-9;
    std::vector<Int> v(rows[0].size());
    enumerate_in_radius<double>(red.gso, radius2, [&](const std::vector<long long>& x) {
        std::fill(v.begin(), v.end(), Int(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += Int(x[i]) * red.rows[i][c];
        }
        Int s = 0;
        for (const Int& e : v)
            if (abs(e) > s) s = abs(e);
        if (s != 0 && s < best) best = s;
    });
    return best;
}

Int min_norm2_exact(const std::vector<std::vector<Int>>& rows) {
    if (rows.empty()) throw std::invalid_argument("rank-0 lattice has no shortest vector");
    auto red = reduce_exact(rows);
    Int best = 0;
    for (const auto& r : red.rows) {
        Int n2 = 0;
        for (const Int& e : r) n2 += e * e;
        if (best == 0 || n2 < best) best = n2;
    }
    double radius2 = best.convert_to<double>() * (1.0 + 1e-6) + 1e-9;
    std::vector<Int> v(rows[0].size());
    enumerate_in_radius<double>(red.gso, radius2, [&](const std::vector<long long>& x) {
        std::fill(v.begin(), v.end(), Int(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += Int(x[i]) * red.rows[i][c];
        }
        Int n2 = 0;
        for (const Int& e : v) n2 += e * e;
        if (n2 != 0 && n2 < best) best = n2;
    });
    return best;
}

template <typename F>
F shortest_vector_float(const std::vector<std::vector<F>>& rows, Norm norm) {
    if (rows.empty()) throw std::invalid_argument("rank-0 lattice has no shortest vector");
    auto b = rows;
    lll_rows<F>(b, nullptr);
    Gso<F> gso = gram_schmidt(b);
    F best(0);
    for (const auto& r : b) {
        F v = norm == Norm::sup ? sup_f(r) : sqrt_f(dot_f(r, r));
        if (best == F(0) || v < best) best = v;
    }
    F radius2 = norm == Norm::sup ? F(rows[0].size()) * best * best : best * best;
    radius2 *= F(1) + F(1e-9);
    std::vector<F> v(rows[0].size());
    enumerate_in_radius<F>(gso, radius2, [&](const std::vector<long long>& x) {
        std::fill(v.begin(), v.end(), F(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += F(x[i]) * b[i][c];
        }
        F val = norm == Norm::sup ? sup_f(v) : sqrt_f(dot_f(v, v));
        if (val > F(0) && val < best) best = val;
    });
    return best;
}

template double shortest_vector_float<double>(const std::vector<std::vector<double>>&, Norm);
template BigFloat shortest_vector_float<BigFloat>(const std::vector<std::vector<BigFloat>>&,
                                                  Norm);

double delta(const LatticeBasis& L, Norm norm) {
    if (L.rank() == 0) throw std::invalid_argument("rank-0 lattice has no shortest vector");
    if (L.exact) {
        double s = to_double(L.scale);
        if (norm == Norm::sup) return min_sup_exact(L.igen).convert_to<double>() * s;
        return std::sqrt(min_norm2_exact(L.igen).convert_to<double>()) * s;
    }
    return shortest_vector_float<double>(L.fgen, norm);
}

Int covolume_squared_exact(const std::vector<std::vector<Int>>& rows) {
    std::size_t k = rows.size();
    IntMatrix gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Int s = 0;
            for (std::size_t c = 0; c < rows[i].size(); ++c) s += rows[i][c] * rows[j][c];
            gram(i, j) = s;
        }
    Int det = bareiss_determinant(std::move(gram));
    if (det <= 0) throw std::invalid_argument("dependent generators");
    return det;
}

double covolume(const LatticeBasis& L) {
    if (L.rank() == 0) throw std::invalid_argument("rank-0 lattice has no covolume");
    if (L.exact) {
        double base = std::sqrt(covolume_squared_exact(L.igen).convert_to<double>());
        return base * std::pow(to_double(L.scale), double(L.rank()));
    }
    std::size_t k = L.fgen.size();
    Mat<double> gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot_f(L.fgen[i], L.fgen[j]);
    double det = gauss_determinant(gram);
    if (det <= 0) throw std::invalid_argument("dependent generators");
    return std::sqrt(det);
}

std::vector<LatticeBasis> enumerate_subgroups(const LatticeBasis& L, std::size_t max_rank,
                                              long height, const SubgroupFamilyOptions& opts) {
    if (!L.exact) throw std::invalid_argument("subgroup enumeration needs an exact basis");
    std::size_t k = L.rank();
    if (max_rank < 1 || max_rank > k) throw std::invalid_argument("max_rank out of range");
    if (height < 1) throw std::invalid_argument("height must be >= 1");

    // canonical primitive coefficient vectors in the height box, lex order
    std::vector<std::vector<Int>> cands;
    std::vector<long> c(k, -height);
    while (true) {
        std::vector<Int> v(k);
        bool nonzero = false;
        for (std::size_t i = 0; i < k; ++i) {
            v[i] = c[i];
            if (c[i] != 0) nonzero = true;
        }
        if (nonzero) {
            bool canonical = true;
            for (std::size_t i = 0; i < k; ++i) {
                if (v[i] == 0) continue;
                canonical = v[i] > 0;
                break;
            }
            if (canonical && gcd_all(v) == 1) cands.push_back(std::move(v));
        }
        std::size_t i = k;
        while (i > 0 && c[i - 1] == height) c[--i] = -height;
        if (i == 0) break;
        ++c[i - 1];
    }

    using Key = std::vector<Int>;
    std::vector<std::map<Key, std::vector<std::vector<Int>>>> by_rank(max_rank + 1);
    for (const auto& v : cands) by_rank[1].emplace(v, std::vector<std::vector<Int>>{v});

    std::size_t scanned = 0;
    for (std::size_t r = 2; r <= max_rank; ++r) {
        if (r == k) {
            // the only primitive full-rank subgroup is L itself
            std::vector<std::vector<Int>> id(k, std::vector<Int>(k, 0));
            for (std::size_t i = 0; i < k; ++i) id[i][i] = 1;
            by_rank[r].emplace(maximal_minors([&] {
                                   IntMatrix m(k, k);
                                   for (std::size_t i = 0; i < k; ++i) m(i, i) = 1;
                                   return m;
                               }()),
                               std::move(id));
            continue;
        }
        for (const auto& [prev_key, prev_rows] : by_rank[r - 1]) {
            for (const auto& cand : cands) {
                if (++scanned > opts.size_guard)
                    throw SizeGuardExceeded(
                        "subgroup enumeration exceeded its size guard; lower the height or "
                        "max_rank");
                IntMatrix m(r, k);
                for (std::size_t i = 0; i + 1 < r; ++i)
                    for (std::size_t j = 0; j < k; ++j) m(i, j) = prev_rows[i][j];
                for (std::size_t j = 0; j < k; ++j) m(r - 1, j) = cand[j];
                auto minors = maximal_minors(m);
                Int g = gcd_all(minors);
                if (g != 1) continue;  // dependent (g=0) or non-primitive
                canonicalize_sign(minors);
                if (by_rank[r].count(minors)) continue;
                IntMatrix h = hermite_normal_form(std::move(m));
                std::vector<std::vector<Int>> rows(r, std::vector<Int>(k));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < k; ++j) rows[i][j] = h(i, j);
                by_rank[r].emplace(std::move(minors), std::move(rows));
                if (by_rank[r].size() > opts.size_guard)
                    throw SizeGuardExceeded("subgroup family exceeded its size guard");
            }
        }
    }

    std::vector<LatticeBasis> out;
    for (std::size_t r = 1; r <= max_rank; ++r) {
        for (const auto& [key, rows] : by_rank[r]) {
            std::vector<std::vector<Int>> gens(r, std::vector<Int>(L.ambient_dim, 0));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    if (rows[i][j] == 0) continue;
                    for (std::size_t col = 0; col < L.ambient_dim; ++col)
                        gens[i][col] += rows[i][j] * L.igen[j][col];
                }
            LatticeBasis sub = LatticeBasis::from_int_rows(std::move(gens));
            sub.scale = L.scale;
            out.push_back(std::move(sub));
        }
    }
    return out;
}

}  // namespace latflow
