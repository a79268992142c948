#include "latflow/nondivergence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

#include "latflow/sampling.hpp"

namespace latflow {

void RealPoly::add(int a, int b, const Rational& c) {
    auto it = terms.find({a, b});
    if (it == terms.end()) {
        if (c != 0) terms.emplace(Monomial{a, b}, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms.erase(it);
}

double RealPoly::eval(double x, double y) const {
    double s = 0;
    for (const auto& [m, c] : terms) {
        double v = c.convert_to<double>();
        for (int i = 0; i < m.first; ++i) v *= x;
        for (int i = 0; i < m.second; ++i) v *= y;
        s += v;
    }
    return s;
}

RealPoly operator*(const RealPoly& p, const RealPoly& q) {
    RealPoly out;
    for (const auto& [mp, cp] : p.terms)
        for (const auto& [mq, cq] : q.terms)
            out.add(mp.first + mq.first, mp.second + mq.second, cp * cq);
    return out;
}

RealPoly operator-(const RealPoly& p, const RealPoly& q) {
    RealPoly out = p;
    for (const auto& [m, c] : q.terms) out.add(m.first, m.second, -c);
    return out;
}

RealPoly real_part(const PolyXY& p) {
    RealPoly out;
    for (const auto& [m, c] : p.terms) out.add(m.first, m.second, c.re);
    return out;
}

RealPoly imag_part(const PolyXY& p) {
    RealPoly out;
    for (const auto& [m, c] : p.terms) out.add(m.first, m.second, c.im);
    return out;
}

std::vector<RealPoly> covolume_span_functions(const AnalyticMap& f) {
    std::size_t n = f.n;
    std::vector<RealPoly> g(n), h(n), out;
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = real_part(f.components[i]);
        h[i] = imag_part(f.components[i]);
    }
    out.reserve(n * (n + 3) / 2);
    for (std::size_t i = 0; i < n; ++i) out.push_back(g[i]);
    for (std::size_t i = 0; i < n; ++i) out.push_back(h[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back(g[i] * h[j] - g[j] * h[i]);
    return out;
}

namespace {

// Polynomial in the 2n formal symbols g_1..g_n, h_1..h_n with rational
// coefficients. Exponent keys are trimmed of trailing zeros, so the constant
// monomial is the empty vector and keys of any length mix freely.
struct PolyGH {
    std::map<std::vector<int>, Rational> terms;

    PolyGH() = default;
    explicit PolyGH(int v) {
        if (v != 0) terms[{}] = v;
    }
    explicit PolyGH(Rational v) {
        if (v != 0) terms[{}] = std::move(v);
    }
    static PolyGH symbol(std::size_t index) {
        PolyGH p;
        std::vector<int> key(index + 1, 0);
        key[index] = 1;
        p.terms[key] = 1;
        return p;
    }

    void add_term(std::vector<int> key, const Rational& c) {
        while (!key.empty() && key.back() == 0) key.pop_back();
        auto it = terms.find(key);
        if (it == terms.end()) {
            if (c != 0) terms.emplace(std::move(key), c);
            return;
        }
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }

    friend bool operator==(const PolyGH& a, const PolyGH& b) { return a.terms == b.terms; }

    PolyGH operator-() const {
        PolyGH out = *this;
        for (auto& [k, c] : out.terms) c = -c;
        return out;
    }

    PolyGH& operator+=(const PolyGH& o) {
        for (const auto& [k, c] : o.terms) add_term(k, c);
        return *this;
    }

    friend PolyGH operator*(const PolyGH& a, const PolyGH& b) {
        PolyGH out;
        for (const auto& [ka, ca] : a.terms)
            for (const auto& [kb, cb] : b.terms) {
                std::vector<int> key(std::max(ka.size(), kb.size()), 0);
                for (std::size_t i = 0; i < ka.size(); ++i) key[i] += ka[i];
                for (std::size_t i = 0; i < kb.size(); ++i) key[i] += kb[i];
                out.add_term(std::move(key), ca * cb);
            }
        return out;
    }

    PolyGH& operator*=(const PolyGH& o) { return *this = *this * o; }
};

}  // namespace

SpanCheck verify_covolume_span(const LatticeBasis& gamma, std::size_t n) {
    if (!gamma.exact) throw std::invalid_argument("span check needs integer generators");
    std::size_t m = n + 2;
    if (gamma.ambient_dim != m)
        throw std::invalid_argument("span check: generator width does not match n");

    Mat<PolyGH> u(m, m);
    for (std::size_t i = 0; i < m; ++i) u(i, i) = PolyGH(1);
    for (std::size_t i = 0; i < n; ++i) {
        u(0, 2 + i) = PolyGH::symbol(i);      // g_{i+1}
        u(1, 2 + i) = PolyGH::symbol(n + i);  // h_{i+1}
    }

    auto w_int = represent_subgroup(gamma.igen);
    Multivector<PolyGH> w(m, w_int.grade);
    for (const auto& [key, c] : w_int.coords) w.coords[key] = PolyGH(Rational(c));

    auto image = apply_exterior(u, w);

    SpanCheck out;
    out.ok = true;
    for (const auto& [key, poly] : image.coords) {
        ++out.coords_checked;
        // quad[(i, j)] = coefficient of g_{i+1} h_{j+1}
        std::map<std::pair<std::size_t, std::size_t>, Rational> quad;
        for (const auto& [exps, c] : poly.terms) {
            int degree = 0;
            std::vector<std::size_t> where;
            for (std::size_t i = 0; i < exps.size(); ++i) {
                if (exps[i] == 0) continue;
                if (exps[i] != 1) {
                    out.ok = false;
                    continue;
                }
                ++degree;
                where.push_back(i);
            }
            if (degree <= 1) continue;  // constants and bare g_i, h_i are in the span
            if (degree > 2 || where.size() != 2) {
                out.ok = false;
                continue;
            }
            bool first_g = where[0] < n, second_g = where[1] < n;
            if (first_g == second_g) {
                out.ok = false;  // g_i g_j or h_i h_j cannot appear
                continue;
            }
            std::size_t gi = first_g ? where[0] : where[1];
            std::size_t hj = (first_g ? where[1] : where[0]) - n;
            if (gi == hj) {
                out.ok = false;  // g_i h_i is not a minor
                continue;
            }
            quad[{gi, hj}] = c;
        }
        // quadratic part must be a combination of g_i h_j - g_j h_i
        for (const auto& [ij, c] : quad) {
            auto it = quad.find({ij.second, ij.first});
            Rational mirror = it == quad.end() ? Rational(0) : it->second;
            if (mirror != -c) out.ok = false;
        }
    }
    return out;
}

double covolume_via_multivector(const AnalyticMap& f, const LatticeBasis& gamma,
                                const FlowTime& t, double x, double y) {
    if (t.n() != f.n) throw std::invalid_argument("flow time dimension does not match map");
    if (gamma.ambient_dim != f.n + 2)
        throw std::invalid_argument("generator width does not match map");
    auto w = represent_subgroup(gamma.rows_as_double());
    MatD u = unipotent_matrix(ComplexPoint::from_complex(f.eval(x, y)));
    MatD m = matmul(flow_matrix(t), u);
    return norm(apply_exterior(m, w));
}

FamilyEvaluator::FamilyEvaluator(const AnalyticMap& f, const std::vector<LatticeBasis>& members,
                                 const FlowTime& t)
    : f_(&f), n_(f.n) {
    if (t.n() != n_) throw std::invalid_argument("flow time dimension does not match map");
    double total = t.total();
    expand_ = std::exp((double(n_) - 1) / (2 * double(n_)) * total);
    contract_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) contract_[i] = std::exp(-t.components[i]);
    members_.reserve(members.size());
    for (const auto& g : members) {
        if (g.ambient_dim != n_ + 2)
            throw std::invalid_argument("family member width does not match map");
        members_.push_back({g.rows_as_double()});
    }
}

void FamilyEvaluator::map_values(double x, double y, std::vector<double>& g,
                                 std::vector<double>& h) const {
    g.resize(n_);
    h.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        auto v = f_->components[i].eval(x, y);
        g[i] = v.real();
        h[i] = v.imag();
    }
}

namespace {

// determinant of a k x k buffer in place, partial pivoting
double flat_det(std::vector<double>& a, std::size_t k) {
    double det = 1;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::fabs(a[r * k + c]) > std::fabs(a[p * k + c])) p = r;
        if (a[p * k + c] == 0) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
            det = -det;
        }
        det *= a[c * k + c];
        for (std::size_t r = c + 1; r < k; ++r) {
            double fac = a[r * k + c] / a[c * k + c];
            for (std::size_t j = c; j < k; ++j) a[r * k + j] -= fac * a[c * k + j];
        }
    }
    return det;
}

}  // namespace

double FamilyEvaluator::value_at(std::size_t m, const std::vector<double>& g,
                                 const std::vector<double>& h, Scratch& s) const {
    const auto& gens = members_[m].gens;
    std::size_t k = gens.size(), w = n_ + 2;
    s.rows.resize(k * w);
    for (std::size_t r = 0; r < k; ++r) {
        const auto& v = gens[r];
        double vg = 0, vh = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            vg += v[2 + i] * g[i];
            vh += v[2 + i] * h[i];
        }
        double* row = &s.rows[r * w];
        row[0] = expand_ * (v[0] + vg);
        row[1] = expand_ * (v[1] + vh);
        for (std::size_t i = 0; i < n_; ++i) row[2 + i] = contract_[i] * v[2 + i];
    }
    s.gram.resize(k * k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = r; c < k; ++c) {
            double d = 0;
            for (std::size_t j = 0; j < w; ++j) d += s.rows[r * w + j] * s.rows[c * w + j];
            s.gram[r * k + c] = d;
            s.gram[c * k + r] = d;
        }
    double det = flat_det(s.gram, k);
    return det > 0 ? std::sqrt(det) : 0.0;
}

double FamilyEvaluator::value(std::size_t m, double x, double y) const {
    Scratch s;
    std::vector<double> g, h;
    map_values(x, y, g, h);
    return value_at(m, g, h, s);
}

void FamilyEvaluator::values(double x, double y, std::vector<double>& out) const {
    Scratch s;
    std::vector<double> g, h;
    map_values(x, y, g, h);
    out.resize(members_.size());
    for (std::size_t m = 0; m < members_.size(); ++m) out[m] = value_at(m, g, h, s);
}

FamilyGoodness family_goodness_fit(const AnalyticMap& f, const Ball& b_tilde,
                                   const std::vector<LatticeBasis>& family,
                                   const std::vector<FlowTime>& ts, std::size_t samples,
                                   const std::vector<double>& eps_grid, std::uint64_t seed,
                                   unsigned workers) {
    if (family.empty() || ts.empty()) throw std::invalid_argument("empty family or time set");
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
    for (double e : eps_grid)
        if (!(e > 0 && e <= 1)) throw std::invalid_argument("eps grid must lie in (0, 1]");

    auto pts = ball_samples(b_tilde, samples, seed);
    std::size_t npts = pts.size(), nmem = family.size(), ng = eps_grid.size();

    FamilyGoodness out;
    out.family_size = nmem;
    for (const auto& g : family)
        if (!verify_covolume_span(g, f.n).ok) ++out.span_failures;

    double c_max = 0, a_min = std::numeric_limits<double>::infinity();
    // members processed in blocks so the cached value matrix stays small
    std::size_t block = std::max<std::size_t>(1, 4'000'000 / std::max<std::size_t>(npts, 1));
    std::vector<double> vals, ratios(ng);
    for (const auto& t : ts) {
        FamilyEvaluator ev(f, family, t);
        for (std::size_t m0 = 0; m0 < nmem; m0 += block) {
            std::size_t m1 = std::min(nmem, m0 + block), bm = m1 - m0;
            vals.assign(bm * npts, 0.0);
            struct SupPart {
                std::vector<double> sup;
            };
            auto sups = parallel_accumulate<SupPart>(
                npts, workers,
                [&](std::uint64_t lo, std::uint64_t hi, SupPart& p) {
                    p.sup.assign(bm, 0.0);
                    FamilyEvaluator::Scratch s;
                    std::vector<double> gv, hv;
                    for (std::uint64_t i = lo; i < hi; ++i) {
                        ev.map_values(pts[i][0], pts[i][1], gv, hv);
                        for (std::size_t m = 0; m < bm; ++m) {
                            double v = ev.value_at(m0 + m, gv, hv, s);
                            vals[m * npts + i] = v;
                            p.sup[m] = std::max(p.sup[m], v);
                        }
                    }
                },
                [](SupPart& a, const SupPart& b) {
                    if (a.sup.empty()) a.sup.assign(b.sup.size(), 0.0);
                    for (std::size_t m = 0; m < b.sup.size(); ++m)
                        a.sup[m] = std::max(a.sup[m], b.sup[m]);
                });
            for (std::size_t m = 0; m < bm; ++m) {
                double sup = sups.sup.empty() ? 0.0 : sups.sup[m];
                for (std::size_t g = 0; g < ng; ++g) {
                    std::uint64_t below = 0;
                    if (sup > 0) {
                        double cut = eps_grid[g] * sup;
                        for (std::size_t i = 0; i < npts; ++i)
                            if (vals[m * npts + i] < cut) ++below;
                    }
                    ratios[g] = npts ? double(below) / double(npts) : 0.0;
                }
                auto fit = fit_sublevel_ratios(eps_grid, ratios, sup, npts);
                if (fit.degenerate) {
                    ++out.degenerate_count;
                    continue;
                }
                c_max = std::max(c_max, fit.C);
                a_min = std::min(a_min, fit.alpha);
            }
        }
    }
    if (c_max == 0) {  // every (member, time) pair was degenerate
        out.C_worst = 1;
        out.alpha_worst = 1;
    } else {
        out.C_worst = c_max;
        out.alpha_worst = a_min;
    }
    return out;
}

std::vector<std::pair<ComplexFn, ComplexFn>> pair_family(const AnalyticMap& f,
                                                         std::size_t angle_count) {
    if (angle_count == 0) throw std::invalid_argument("need at least one angle");
    std::size_t n = f.n;
    std::vector<std::pair<ComplexFn, ComplexFn>> pairs;

    auto dot_f = [](const AnalyticMap& map, const std::vector<double>& u, double x, double y) {
        std::complex<double> s = 0;
        for (std::size_t i = 0; i < map.n; ++i)
            if (u[i] != 0) s += u[i] * map.components[i].eval(x, y);
        return s;
    };
    auto push = [&](std::vector<double> u1, std::vector<double> u2) {
        for (std::size_t j = 0; j < 2 * angle_count; ++j) {
            double psi = 2 * 3.14159265358979323846 * double(j) / double(2 * angle_count);
            double a = std::cos(psi), b = std::sin(psi);
            ComplexFn p1 = [f, u1, dot_f](double x, double y) { return dot_f(f, u1, x, y); };
            ComplexFn p2 = [f, u2, dot_f, a, b](double x, double y) {
                return a + b * dot_f(f, u2, x, y);
            };
            pairs.emplace_back(std::move(p1), std::move(p2));
        }
    };

    if (n == 1) {
        // no direction orthogonal to u1 exists, which is the b = 0 case:
        // the second member degenerates to the constant 1
        ComplexFn p1 = [f](double x, double y) { return f.components[0].eval(x, y); };
        ComplexFn p2 = [](double, double) { return std::complex<double>(1, 0); };
        pairs.emplace_back(std::move(p1), std::move(p2));
        return pairs;
    }
    if (n == 2) {
        for (std::size_t k = 0; k < angle_count; ++k) {
            double th = 3.14159265358979323846 * double(k) / double(angle_count);
            push({std::cos(th), std::sin(th)}, {-std::sin(th), std::cos(th)});
        }
        return pairs;
    }
    // higher dimensions: deterministic pseudo-random orthonormal pairs
    SplitMix64 rng(0x7e57ab1e5eedULL);
    auto gaussian = [&rng]() {
        double u = std::max(rng.next_unit(), 1e-300), v = rng.next_unit();
        return std::sqrt(-2 * std::log(u)) * std::cos(2 * 3.14159265358979323846 * v);
    };
    for (std::size_t k = 0; k < angle_count * angle_count; ++k) {
        std::vector<double> u1(n), u2(n);
        for (auto& c : u1) c = gaussian();
        for (auto& c : u2) c = gaussian();
        double n1 = std::sqrt(dot(u1, u1));
        if (n1 < 1e-12) continue;
        for (auto& c : u1) c /= n1;
        double d = dot(u1, u2);
        for (std::size_t i = 0; i < n; ++i) u2[i] -= d * u1[i];
        double n2 = std::sqrt(dot(u2, u2));
        if (n2 < 1e-12) continue;
        for (auto& c : u2) c /= n2;
        push(u1, u2);
    }
    return pairs;
}

SupFloor family_sup_floor(const AnalyticMap& f, const Ball& b,
                          const std::vector<LatticeBasis>& family,
                          const std::vector<FlowTime>& ts, std::size_t samples,
                          std::uint64_t seed, std::size_t pair_angles) {
    if (family.empty() || ts.empty()) throw std::invalid_argument("empty family or time set");
    auto pts = ball_samples(b, samples, seed);
    if (pts.empty()) throw std::invalid_argument("no sample points landed in the ball");

    SupFloor out;
    out.rho = std::numeric_limits<double>::infinity();
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        FamilyEvaluator ev(f, family, ts[ti]);
        // map values per point are shared by every member
        std::vector<std::vector<double>> gv(pts.size()), hv(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            ev.map_values(pts[i][0], pts[i][1], gv[i], hv[i]);
        FamilyEvaluator::Scratch s;
        for (std::size_t m = 0; m < family.size(); ++m) {
            double sup = 0;
            bool pruned = false;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                sup = std::max(sup, ev.value_at(m, gv[i], hv[i], s));
                if (sup > out.rho) {
                    pruned = true;  // cannot become the minimum
                    break;
                }
            }
            if (!pruned && sup < out.rho) {
                out.rho = sup;
                out.argmin_member = m;
                out.argmin_t = ti;
            }
        }
    }

    std::vector<ComplexFn> real_parts;
    for (std::size_t i = 0; i < f.n; ++i)
        real_parts.push_back([f, i](double x, double y) {
            return std::complex<double>(f.components[i].eval(x, y).real(), 0);
        });
    out.rho1 = combination_sup_floor(pts, real_parts);
    out.rho2 = imag_pair_floor(pts, pair_family(f, pair_angles));
    return out;
}

NondivReport sublevel_bound_experiment(const AnalyticMap& f, const Ball& b, const FlowTime& t,
                                       double C, double alpha, double rho, double c,
                                       const std::vector<double>& eps_grid,
                                       std::size_t samples, std::uint64_t seed,
                                       unsigned workers) {
    if (!(C > 0) || !(alpha > 0) || !(rho > 0) || !(c > 0))
        throw std::invalid_argument("C, alpha, rho, c must be positive");
    if (eps_grid.empty()) throw std::invalid_argument("empty eps grid");
    for (double e : eps_grid)
        if (!(e > 0) || e > rho)
            throw std::invalid_argument("eps grid must lie in (0, rho]");
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
    if (t.n() != f.n) throw std::invalid_argument("flow time dimension does not match map");

    auto pts = ball_samples(b, samples, seed);
    std::vector<double> vals(pts.size());
    parallel_accumulate<int>(
        pts.size(), workers,
        [&](std::uint64_t lo, std::uint64_t hi, int&) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                auto z = ComplexPoint::from_complex(f.eval(pts[i][0], pts[i][1]));
                vals[i] = orbit_shortest(z, t, Norm::euclidean);
            }
        },
        [](int&, const int&) {});

    NondivReport rep;
    rep.t = t;
    rep.eps_grid = eps_grid;
    rep.rho_used = rho;
    rep.C_used = C;
    rep.alpha_used = alpha;
    rep.c_used = c;
    rep.ball_area = b.area();
    rep.samples = pts.size();
    double npts = double(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (double eps : eps_grid) {
        std::uint64_t below = 0;
        for (double v : vals)
            if (v < eps) ++below;
        double ratio = double(below) / npts;
        double measured = ratio * rep.ball_area;
        double bound = c * C * std::pow(eps / rho, alpha) * rep.ball_area;
        rep.measured.push_back(measured);
        rep.bound.push_back(bound);
        // binomial error bar on the sampled ratio, as in the goodness checks
        double sigma = std::sqrt(std::max(ratio * (1 - ratio), 1.0 / npts) / npts);
        if (measured > bound + 3 * sigma * rep.ball_area) ++rep.violations;
        if (measured > 0) {
            double lx = std::log(eps), ly = std::log(measured);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++used;
        }
    }
    if (used >= 2) {
        double var = sxx - sx * sx / double(used);
        if (var > 0) rep.slope_fit = (sxy - sx * sy / double(used)) / var;
    }
    return rep;
}

namespace {

void compositions(std::size_t n, int total, std::vector<double>& cur,
                  const std::function<void(const std::vector<double>&)>& emit) {
    if (cur.size() + 1 == n) {
        cur.push_back(double(total));
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(double(v));
        compositions(n, total - v, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

ShellSeries borel_cantelli_series(const AnalyticMap& f, const Ball& b, double gamma, int T_max,
                                  std::size_t samples, std::uint64_t seed, unsigned workers) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (T_max < 1) throw std::invalid_argument("need at least one shell");
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");

    auto pts = ball_samples(b, samples, seed);
    if (pts.empty()) throw std::invalid_argument("no sample points landed in the ball");
    // map values are reused across every flow time
    std::vector<ComplexPoint> zs;
    zs.reserve(pts.size());
    for (const auto& p : pts) zs.push_back(ComplexPoint::from_complex(f.eval(p[0], p[1])));

    ShellSeries out;
    out.gamma = gamma;
    out.T_max = T_max;
    out.samples_per_time = pts.size();
    double area = b.area(), acc = 0;
    for (int T = 1; T <= T_max; ++T) {
        double threshold = std::exp(-gamma * double(T));
        double shell = 0;
        std::vector<double> cur;
        compositions(f.n, T, cur, [&](const std::vector<double>& tvec) {
            FlowTime t(tvec);
            struct CountPart {
                std::uint64_t below = 0;
            };
            auto part = parallel_accumulate<CountPart>(
                zs.size(), workers,
                [&](std::uint64_t lo, std::uint64_t hi, CountPart& p) {
                    for (std::uint64_t i = lo; i < hi; ++i)
                        if (orbit_shortest(zs[i], t, Norm::sup) <= threshold) ++p.below;
                },
                [](CountPart& a, const CountPart& b) { a.below += b.below; });
            shell += double(part.below) / double(zs.size()) * area;
        });
        acc += shell;
        out.shell_measure.push_back(shell);
        out.partial_sum.push_back(acc);
    }
    return out;
}

namespace {

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// subtract components along an orthonormal list; returns the residual norm
double gs_residual(std::vector<double>& v, const std::vector<std::vector<double>>& onb) {
    for (const auto& u : onb) {
        double d = vec_dot(v, u);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * u[i];
    }
    return std::sqrt(vec_dot(v, v));
}

// orthonormal basis of the span of the rows
std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> onb;
    for (auto v : rows) {
        double r = gs_residual(v, onb);
        if (r < 1e-9) continue;
        for (auto& c : v) c /= r;
        onb.push_back(std::move(v));
    }
    return onb;
}

// orthonormal vectors of span(onb) orthogonal to every constraint vector
std::vector<std::vector<double>> null_within(const std::vector<std::vector<double>>& onb,
                                             const std::vector<std::vector<double>>& constraints) {
    std::size_t k = onb.size();
    // constraint rows in the coordinates of onb
    std::vector<std::vector<double>> rows;
    for (const auto& c : constraints) {
        std::vector<double> r(k);
        for (std::size_t i = 0; i < k; ++i) r[i] = vec_dot(onb[i], c);
        rows.push_back(std::move(r));
    }
    auto q = orthonormalize(rows);
    std::vector<std::vector<double>> coords;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> e(k, 0.0);
        e[i] = 1;
        double r = gs_residual(e, q);
        if (r < 1e-9) continue;
        for (auto& c : e) c /= r;
        q.push_back(e);  // keep accumulating so the output is orthonormal
        coords.push_back(std::move(e));
    }
    // lift back to the ambient space
    std::vector<std::vector<double>> out;
    for (const auto& c : coords) {
        std::vector<double> v(onb.empty() ? 0 : onb[0].size(), 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += c[i] * onb[i][j];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> axis(std::size_t m, std::size_t i) {
    std::vector<double> e(m, 0.0);
    e[i] = 1;
    return e;
}

double mv_dot(const Multivector<double>& a, const Multivector<double>& b) {
    double s = 0;
    for (const auto& [k, c] : a.coords) {
        auto it = b.coords.find(k);
        if (it != b.coords.end()) s += c * it->second;
    }
    return s;
}

}  // namespace

OrthFrame orthonormal_frame(const std::vector<std::vector<double>>& gens, std::size_t n,
                            std::size_t heavy_axis) {
    if (gens.empty()) throw std::invalid_argument("empty generator list");
    std::size_t m = n + 2, k = gens.size();
    if (heavy_axis >= n) throw std::invalid_argument("heavy axis out of range");
    for (const auto& g : gens)
        if (g.size() != m) throw std::invalid_argument("generator width does not match n");

    auto bv = orthonormalize(gens);
    if (bv.size() != k) throw std::invalid_argument("dependent generators");
    auto e0 = axis(m, 0), estar = axis(m, 1), eheavy = axis(m, 2 + heavy_axis);

    OrthFrame out;
    {
        double s = 0;
        for (const auto& u : bv) {
            double d = vec_dot(u, e0);
            s += d * d;
        }
        out.e0_in_span = s > 1 - 1e-9;
    }

    // v_1..v_{k-2} orthogonal to e0 and the heavy axis, then v_{k-1}
    // orthogonal to e0 only, all inside the span of the generators
    std::vector<std::vector<double>> frame_tail;
    if (k >= 2) {
        auto s2 = null_within(bv, {e0, eheavy});
        for (std::size_t i = 0; i < k - 2 && i < s2.size(); ++i) frame_tail.push_back(s2[i]);
        auto s1 = null_within(bv, {e0});
        for (auto& cand : s1) {
            if (frame_tail.size() == k - 1) break;
            double r = gs_residual(cand, frame_tail);
            if (r < 1e-9) continue;
            for (auto& c : cand) c /= r;
            frame_tail.push_back(std::move(cand));
        }
        if (frame_tail.size() != k - 1)
            throw std::invalid_argument("frame construction failed, generators too degenerate");
    }

    std::vector<double> v0;
    if (!out.e0_in_span) {
        // complete {e0, v_1..v_{k-1}} to a basis of span(e0) + span(gens)
        std::vector<std::vector<double>> onb = {e0};
        for (const auto& v : frame_tail) onb.push_back(v);
        for (const auto& g : bv) {
            auto cand = g;
            double r = gs_residual(cand, onb);
            if (r < 1e-9) continue;
            for (auto& c : cand) c /= r;
            v0 = std::move(cand);
            break;
        }
    } else {
        // any unit vector orthogonal to e*, the generators, and e0
        std::vector<std::vector<double>> onb = {estar};
        for (const auto& g : bv) onb.push_back(g);
        for (std::size_t i = 0; i < m; ++i) {
            auto cand = axis(m, i);
            double r = gs_residual(cand, onb);
            if (r < 1e-9) continue;
            for (auto& c : cand) c /= r;
            v0 = std::move(cand);
            break;
        }
    }
    if (v0.empty()) v0.assign(m, 0.0);  // full-rank case: b is forced to 0 anyway

    out.v.push_back(v0);
    for (auto& v : frame_tail) out.v.push_back(std::move(v));

    // coefficients against the representing multivector of the generators
    auto w = represent_subgroup(gens);
    auto wedge_with = [&](const std::vector<double>& head) {
        auto acc = Multivector<double>::from_vector(head);
        for (std::size_t i = 1; i < out.v.size(); ++i)
            acc = wedge(acc, Multivector<double>::from_vector(out.v[i]));
        return acc;
    };
    out.a = mv_dot(w, wedge_with(e0));
    bool v0_zero = vec_dot(v0, v0) < 0.5;
    out.b = v0_zero ? 0.0 : mv_dot(w, wedge_with(v0));
    return out;
}

Multivector<double> unipotent_multivector(const AnalyticMap& f, const LatticeBasis& gamma,
                                          double x, double y) {
    if (gamma.ambient_dim != f.n + 2)
        throw std::invalid_argument("generator width does not match map");
    auto w = represent_subgroup(gamma.rows_as_double());
    MatD u = unipotent_matrix(ComplexPoint::from_complex(f.eval(x, y)));
    return apply_exterior(u, w);
}

Multivector<double> exterior_rest(const Multivector<double>& w) {
    if (w.grade < 2) throw std::invalid_argument("need grade at least 2");
    Multivector<double> out(w.ambient_dim, w.grade - 2);
    for (const auto& [key, c] : w.coords) {
        if (key.size() < 2 || key[0] != 0 || key[1] != 1) continue;
        IndexSet rest(key.begin() + 2, key.end());
        out.coords[rest] = c;
    }
    return out;
}

}  // namespace latflow
